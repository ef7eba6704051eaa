#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>

#include "xa/rng.hpp"

namespace xa {

enum class TestMethod { ks_asymptotic, permutation_exact, permutation_monte_carlo };

[[nodiscard]] std::string_view to_string(TestMethod method) noexcept;

/// One two-sample comparison.
struct TestOutcome {
    double statistic = 0.0;
    double p_value = 1.0;
    TestMethod method = TestMethod::ks_asymptotic;
    std::size_t m = 0;  // size of sample A
    std::size_t n = 0;  // size of sample B
    // ks_asymptotic: validity_check(m, n). Permutation: min(m, n) >= kMinPermutationSample.
    bool valid = false;
};

inline constexpr std::size_t kMinPermutationSample = 5;
inline constexpr std::size_t kDefaultPermutations = 1000;

/// sup_z |T_m(z) - S_n(z)| by a merge over the sorted pooled values; ECDFs are
/// compared only after every copy of a tied value has been consumed.
[[nodiscard]] double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Limiting Kolmogorov distribution Q(z) = 1 - 2 sum (-1)^(i-1) exp(-2 i^2 z^2).
[[nodiscard]] double kolmogorov_cdf(double z);
/// 1 - Q(z), evaluated without cancellation in the upper tail.
[[nodiscard]] double kolmogorov_sf(double z);

/// Asymptotic p-value with the Stephens effective-size correction:
/// lambda = (sqrt(Ne) + 0.12 + 0.11/sqrt(Ne)) * d_obs, Ne = mn/(m+n).
[[nodiscard]] TestOutcome ks_p_value(double d_obs, std::size_t m, std::size_t n);

/// ks_statistic followed by ks_p_value.
[[nodiscard]] TestOutcome ks_test(std::span<const double> a, std::span<const double> b);

/// nm/(n+m) > 4 and min(n, m) > 30.
[[nodiscard]] bool validity_check(std::size_t m, std::size_t n) noexcept;

/// Two-sample permutation test on the KS statistic. When C(m+n, m) <= s_max
/// every relabelling is enumerated and p = #{D* >= D} / C(m+n, m); otherwise
/// s_max random relabellings are drawn and p = (1 + #{D* >= D}) / (1 + s_max).
[[nodiscard]] TestOutcome permutation_test(std::span<const double> a, std::span<const double> b,
                                           const RngHandle& rng, std::size_t s_max = kDefaultPermutations);

/// Number of relabellings C(m+n, m), saturated at `cap + 1`.
[[nodiscard]] std::uint64_t binomial_capped(std::size_t m_plus_n, std::size_t m, std::uint64_t cap);

struct OneSampleOutcome {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample KS against a continuous reference CDF (Stephens-corrected p).
[[nodiscard]] OneSampleOutcome ks_one_sample(std::span<const double> sample,
                                             const std::function<double(double)>& cdf);

}  // namespace xa
