#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "xa/xa_test.hpp"

namespace xa {

inline constexpr const char* kToolVersion = "0.1.0";

/// Ordered key/value document: `key = value` lines, '#' comments, blank lines ignored.
using KeyValues = std::map<std::string, std::string>;

/// Throws ValidationError naming the line of a malformed entry or a repeated key.
[[nodiscard]] KeyValues read_key_values(std::istream& in);
[[nodiscard]] KeyValues read_key_values_file(const std::string& path);
void write_key_values(std::ostream& out, const KeyValues& kv);

/// One row per (age, trial):
/// age_index,t_a,trial,p_value,method,m,n,valid
void write_results_csv(std::ostream& out, const XAResult& result);

/// One row per age:
/// age_index,t_a,g_p,fisher_p,fisher_p_adjusted,uniformity_p,in_stripe,valid,
/// q1,median,q3,whisker_lo,whisker_hi,outliers
void write_ages_csv(std::ostream& out, const XAResult& result);

/// Summary document (mu0, sigma, stripe, z_g, verdict, config echo, warnings).
[[nodiscard]] KeyValues summary_of(const XAResult& result);

struct RunManifest {
    std::string command;
    KeyValues config;  // fully resolved parameters
    std::uint64_t seed = 0;
    std::string version = kToolVersion;
    std::map<std::string, std::string> input_digests;  // path -> sha256 hex
    std::string created;                               // UTC, ISO 8601

    [[nodiscard]] KeyValues to_key_values() const;
};

/// Lowercase hex SHA-256 of a file's bytes. Throws IoError when unreadable.
[[nodiscard]] std::string sha256_file(const std::string& path);
[[nodiscard]] std::string sha256_hex(const std::string& bytes);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
[[nodiscard]] std::string utc_timestamp();

/// Writes `text` to `path`, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

/// Strict decimal parse (whole string must be consumed).
[[nodiscard]] double parse_double(const std::string& text, const std::string& what);

}  // namespace xa
