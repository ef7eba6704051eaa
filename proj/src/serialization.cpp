#include "xa/serialization.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "xa/errors.hpp"
#include "xa/format.hpp"

namespace xa {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

KeyValues read_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("line " + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) {
            throw ValidationError("line " + std::to_string(number) + ": empty key");
        }
        if (!kv.emplace(key, trim(t.substr(eq + 1))).second) {
            throw ValidationError("line " + std::to_string(number) + ": repeated key '" + key + "'");
        }
    }
    return kv;
}

KeyValues read_key_values_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return read_key_values(in);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void write_key_values(std::ostream& out, const KeyValues& kv) {
    for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

void write_results_csv(std::ostream& out, const XAResult& result) {
    out << "age_index,t_a,trial,p_value,method,m,n,valid\n";
    for (const auto& age : result.ages) {
        for (std::size_t i = 0; i < age.trials.size(); ++i) {
            const auto& t = age.trials[i];
            out << age.age_index << ',' << format_double(age.t_a) << ',' << i << ',' << format_double(t.p_value) << ','
                << to_string(t.method) << ',' << t.m << ',' << t.n << ',' << flag(t.valid) << '\n';
        }
    }
}

void write_ages_csv(std::ostream& out, const XAResult& result) {
    out << "age_index,t_a,g_p,fisher_p,fisher_p_adjusted,uniformity_p,in_stripe,valid,q1,median,q3,whisker_lo,"
           "whisker_hi,outliers\n";
    for (const auto& a : result.ages) {
        out << a.age_index << ',' << format_double(a.t_a) << ',' << format_double(a.g_p) << ','
            << format_double(a.fisher_p) << ',' << format_double(a.fisher_p_adjusted) << ','
            << format_double(a.uniformity_p) << ',' << flag(a.in_stripe) << ',' << flag(a.valid) << ','
            << format_double(a.box.q1) << ',' << format_double(a.box.median) << ',' << format_double(a.box.q3) << ','
            << format_double(a.box.whisker_lo) << ',' << format_double(a.box.whisker_hi) << ',' << a.box.outliers
            << '\n';
    }
}

KeyValues summary_of(const XAResult& r) {
    const XAConfig& c = r.config;
    KeyValues kv;
    kv["engine"] = r.single_realization ? "single" : "exact";
    kv["mu0"] = format_double(r.mu0);
    kv["sigma"] = format_double(r.sigma);
    kv["stripe_lo"] = format_double(r.stripe_lo);
    kv["stripe_hi"] = format_double(r.stripe_hi);
    kv["z_g"] = format_double(r.z_g);
    kv["z_critical"] = format_double(r.z_critical);
    kv["z_reject"] = flag(r.z_reject);
    kv["reject_renewal"] = flag(r.reject_renewal);
    kv["calibration"] = std::string(to_string(c.calibration));
    kv["adjust"] = std::string(to_string(r.adjust));
    kv["alpha"] = format_double(c.alpha);
    kv["N"] = std::to_string(c.N);
    kv["T_a"] = std::to_string(c.T_a);
    kv["t_a_min"] = format_double(c.t_a_min);
    kv["t_a_max"] = format_double(c.t_a_max);
    kv["method"] = std::string(to_string(c.method));
    kv["s_max"] = std::to_string(c.s_max);
    kv["seed"] = std::to_string(c.seed);
    kv["valid_ages"] = std::to_string(r.valid_ages);
    std::size_t inside = 0;
    for (const auto& a : r.ages) inside += a.in_stripe ? 1 : 0;
    kv["ages_in_stripe"] = std::to_string(inside);
    kv["warnings"] = std::to_string(r.warnings.size());
    for (std::size_t i = 0; i < r.warnings.size(); ++i) {
        std::ostringstream key;
        key << "warning." << std::setw(3) << std::setfill('0') << i + 1;
        kv[key.str()] = r.warnings[i];
    }
    return kv;
}

KeyValues RunManifest::to_key_values() const {
    KeyValues kv;
    kv["command"] = command;
    kv["seed"] = std::to_string(seed);
    kv["version"] = version;
    kv["created"] = created;
    for (const auto& [k, v] : config) kv["config." + k] = v;
    for (const auto& [path, digest] : input_digests) kv["input_sha256." + path] = digest;
    return kv;
}

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("SHA-256 computation failed");
    }
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) {
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return out.str();
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || end != t.data() + t.size()) {
        throw ValidationError(what + ": not a number: '" + text + "'");
    }
    return v;
}

}  // namespace xa
