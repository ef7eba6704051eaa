#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xa/event_core.hpp"
#include "xa/meta_analysis.hpp"
#include "xa/rng.hpp"
#include "xa/two_sample.hpp"

namespace xa {

enum class Method { ks, permutation, automatic };
enum class Adjust { none, bonferroni };

[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method method_from_string(std::string_view s);
[[nodiscard]] std::string_view to_string(Adjust a) noexcept;
[[nodiscard]] Adjust adjust_from_string(std::string_view s);

struct XAConfig {
    double t_a_min = 0.0;
    double t_a_max = 100.0;
    std::size_t T_a = 20;
    std::size_t N = 100;
    Method method = Method::ks;
    double alpha = 0.05;
    Calibration calibration = Calibration::stripe_calibrated;
    std::uint64_t seed = 0;
    std::size_t s_max = kDefaultPermutations;  // permutation budget
    std::size_t workers = 1;                   // 0 = hardware concurrency; never affects results

    /// Throws ConfigError naming the violated rule.
    void validate() const;
    /// T_a evenly spaced latencies from t_a_min to t_a_max inclusive.
    [[nodiscard]] std::vector<double> grid() const;
};

/// What default_config needs to know about a source.
struct SourceSummary {
    double event_count = 0.0;  // L, number of waiting times per realization
    double mean_tau = 0.0;
    double tau_p1 = 0.0;       // 1st percentile of the waiting times (0 if unknown)
    // Overrides L mean_tau / 30 as t_a_max, e.g. max_valid_age of a pilot
    // realization when the mean waiting time is infinite.
    std::optional<double> t_a_cap;
};

/// Largest latency (to 0.1% relative) at which sequential aging of `taus`
/// still yields more than `min_count` samples.
[[nodiscard]] double max_valid_age(const InterArrivalSequence& taus, std::size_t min_count = 30);

/// Expected number of sequential aged samples from L waiting times of mean
/// `mean_tau` at latency t_a: L mean_tau / (t_a + mean_tau).
[[nodiscard]] double expected_aged_count(double event_count, double mean_tau, double t_a);

/// t_a_max = L mean_tau / 30, t_a_min = max(t_a_max / T_a, 10 tau_p1),
/// T_a = 20, N = 100, KS. Warnings go to `warnings` when given.
/// Throws ConfigError when L < 100 or no age can be valid.
[[nodiscard]] XAConfig default_config(const SourceSummary& source, std::vector<std::string>* warnings = nullptr);

struct BoxStats {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_lo = 0.0;  // most extreme values within 1.5 IQR of the box
    double whisker_hi = 0.0;
    std::size_t outliers = 0;
};

/// Quartiles (linear interpolation between order statistics) and Tukey whiskers.
[[nodiscard]] BoxStats box_stats(std::vector<double> values);

struct TrialResult {
    double p_value = 0.0;  // NaN when an aged sample was empty
    TestMethod method = TestMethod::ks_asymptotic;
    std::size_t m = 0;
    std::size_t n = 0;
    bool valid = false;
};

struct AgeResult {
    std::size_t age_index = 0;
    double t_a = 0.0;
    std::vector<TrialResult> trials;
    double g_p = 0.0;
    double fisher_p = 0.0;
    double fisher_p_adjusted = 0.0;  // equals fisher_p unless Bonferroni applies
    double uniformity_p = 0.0;       // one-sample KS of the p-values against U(0, 1)
    bool in_stripe = false;
    bool valid = false;
    BoxStats box;

    /// Finite p-values in trial order.
    [[nodiscard]] std::vector<double> p_values() const;
};

struct XAResult {
    XAConfig config;
    std::vector<AgeResult> ages;
    double mu0 = 0.0;
    double sigma = 0.0;
    double stripe_lo = 0.0;
    double stripe_hi = 0.0;
    double z_g = 0.0;
    double z_critical = 0.0;  // Phi^-1(alpha)
    std::size_t valid_ages = 0;
    bool z_reject = false;        // z_g < z_critical
    bool reject_renewal = false;  // z_reject, or the Bonferroni-adjusted Fisher verdict
    Adjust adjust = Adjust::none;
    bool single_realization = false;
    std::vector<std::string> warnings;
};

/// Produces the (A, B) realizations for one (age, trial) cell from its
/// substream, as waiting-time sequences. The two members must be independent.
using PairSource = std::function<std::pair<InterArrivalSequence, InterArrivalSequence>(const RngHandle&)>;

/// Pair source drawing A and B from children 0 and 1 of the cell handle.
[[nodiscard]] PairSource pair_source_from(std::function<InterArrivalSequence(const RngHandle&)> realization);

/// Repeated-realization XA test. Cell (age k, trial i) uses the substream
/// {k, i} of the run seed: children 0/1 for the pair, 2 for the shuffle,
/// 3 for the permutation test.
[[nodiscard]] XAResult run_exact(const PairSource& pairs, const XAConfig& config);

/// Feeds recorded realizations into run_exact's pairing contract. Each age
/// draws 2N distinct realizations without replacement; with fewer than 2N,
/// `allow_reuse` permits reuse across trials (with a warning).
[[nodiscard]] XAResult run_exact_on_samples(const std::vector<EventSequence>& realizations, const XAConfig& config,
                                            bool allow_reuse = false);

/// Meta-analysis shared by both engines: fills per-age statistics, stripe,
/// z_g and the verdict from already populated trials.
void finalize_result(XAResult& result);

/// Runs the configured two-sample test on two aged samples. Empty samples give
/// p = NaN and valid = false.
[[nodiscard]] TrialResult compare_aged(const std::vector<double>& a, const std::vector<double>& b, Method method,
                                       std::size_t s_max, const RngHandle& rng);

}  // namespace xa
