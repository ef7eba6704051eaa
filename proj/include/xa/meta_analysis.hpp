#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xa {

/// How the global Z statistic over per-age geometric means is standardised.
enum class Calibration {
    paper_literal,      ///< (g - 1/e) / sqrt(e^-2 / N), ignores the number of ages
    stripe_calibrated,  ///< (g - mu0(N)) sqrt(T_a) / sigma(N), standard normal under the null
};

[[nodiscard]] std::string_view to_string(Calibration c) noexcept;
[[nodiscard]] Calibration calibration_from_string(std::string_view s);

/// Null law of the geometric mean of N independent U(0,1) p-values.
struct GeoNull {
    std::size_t N = 1;
    double mu0 = 0.5;    // (1 + 1/N)^-N
    double sigma = 0.0;  // sqrt((1 + 2/N)^-N - (1 + 1/N)^-2N)

    [[nodiscard]] static GeoNull for_trials(std::size_t N);
};

/// Smallest p-value admitted before taking logs.
inline constexpr double kPValueFloor = 1e-300;

/// exp(mean(log p)). Zeros are floored at kPValueFloor and reported through
/// `warnings` when given. Throws ValidationError for empty input or p outside [0, 1].
[[nodiscard]] double geometric_mean(std::span<const double> p, std::vector<std::string>* warnings = nullptr);

/// Fisher's method: upper chi-square(2N) tail at -2 sum log p.
[[nodiscard]] double fisher_combine(std::span<const double> p);

/// Density (N / Gamma(N)) (-N g log g)^(N-1) on (0, 1).
[[nodiscard]] double geo_null_pdf(std::size_t N, double g);
/// P(G <= g) = Q(N, -N log g), the regularised upper incomplete gamma.
[[nodiscard]] double geo_null_cdf(std::size_t N, double g);
/// Inverse of geo_null_cdf by bisection to 1e-10 in g.
[[nodiscard]] double geo_null_quantile(std::size_t N, double q);

/// Global statistic over per-age geometric means (each from N p-values).
[[nodiscard]] double z_statistic(std::span<const double> g_means, std::size_t N, Calibration calibration);

/// Standard error of the mean of T_a geometric means under `calibration`.
[[nodiscard]] double z_standard_error(std::size_t N, std::size_t T_a, Calibration calibration);

/// Power of the lower-tailed z-test when per-age means have expectation mu1:
/// 1 - Phi(z_{1-alpha} - (mu0 - mu1) / sigma_n).
[[nodiscard]] double power_lower_tailed(double mu1, std::size_t N, std::size_t T_a, double alpha,
                                        Calibration calibration = Calibration::stripe_calibrated);

/// mu_y + sigma_y * sqrt(2) * erfinv(2 F(g) - 1), F = geo_null_cdf. Maps rho_N
/// draws onto Normal(mu_y, sigma_y^2); strictly increasing in g.
[[nodiscard]] double gaussianize(double g, std::size_t N, double mu_y, double sigma_y);

struct NormalFit {
    double mean = 0.0;
    double sd = 0.0;      // MLE (divides by n)
    double gof_p = 1.0;   // one-sample KS against Normal(mean, sd)
};

[[nodiscard]] NormalFit mle_normal_fit(std::span<const double> values);

[[nodiscard]] double normal_cdf(double x);
[[nodiscard]] double normal_quantile(double q);

}  // namespace xa
