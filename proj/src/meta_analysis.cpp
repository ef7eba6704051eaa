#include "xa/meta_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "xa/errors.hpp"
#include "xa/two_sample.hpp"

namespace xa {

namespace {

double sum_log(std::span<const double> p, std::vector<std::string>* warnings) {
    if (p.empty()) {
        throw ValidationError("cannot combine an empty list of p-values");
    }
    double s = 0.0;
    std::size_t floored = 0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError("p-values must lie in [0, 1]");
        }
        if (v < kPValueFloor) {
            v = kPValueFloor;
            ++floored;
        }
        s += std::log(v);
    }
    if (floored > 0 && warnings != nullptr) {
        warnings->push_back(std::to_string(floored) + " p-value(s) of zero floored at 1e-300");
    }
    return s;
}

void require_trials(std::size_t N) {
    if (N == 0) {
        throw ValidationError("number of combined p-values N must be at least 1");
    }
}

}  // namespace

std::string_view to_string(Calibration c) noexcept {
    return c == Calibration::paper_literal ? "paper_literal" : "stripe_calibrated";
}

Calibration calibration_from_string(std::string_view s) {
    if (s == "paper_literal") return Calibration::paper_literal;
    if (s == "stripe_calibrated") return Calibration::stripe_calibrated;
    throw ValidationError("unknown calibration '" + std::string(s) + "'");
}

GeoNull GeoNull::for_trials(std::size_t N) {
    require_trials(N);
    const double n = static_cast<double>(N);
    GeoNull g;
    g.N = N;
    g.mu0 = std::pow(1.0 + 1.0 / n, -n);
    // exp/log form keeps the difference accurate for large N.
    const double second = std::exp(-n * std::log1p(2.0 / n));
    const double first_sq = std::exp(-2.0 * n * std::log1p(1.0 / n));
    g.sigma = std::sqrt(second - first_sq);
    return g;
}

double geometric_mean(std::span<const double> p, std::vector<std::string>* warnings) {
    return std::exp(sum_log(p, warnings) / static_cast<double>(p.size()));
}

double fisher_combine(std::span<const double> p) {
    const double s = -sum_log(p, nullptr);
    // chi-square(2N) upper tail at 2s == Q(N, s).
    return boost::math::gamma_q(static_cast<double>(p.size()), s);
}

double geo_null_pdf(std::size_t N, double g) {
    require_trials(N);
    if (!(g > 0.0 && g < 1.0)) {
        throw ValidationError("geometric-mean density is defined on (0, 1)");
    }
    const double n = static_cast<double>(N);
    if (N == 1) {
        return 1.0;
    }
    const double log_pdf = std::log(n) - std::lgamma(n) + (n - 1.0) * std::log(-n * g * std::log(g));
    return std::exp(log_pdf);
}

double geo_null_cdf(std::size_t N, double g) {
    require_trials(N);
    if (!(g > 0.0 && g < 1.0)) {
        throw ValidationError("geometric-mean CDF argument must lie in (0, 1)");
    }
    const double n = static_cast<double>(N);
    return boost::math::gamma_q(n, -n * std::log(g));
}

double geo_null_quantile(std::size_t N, double q) {
    require_trials(N);
    if (!(q > 0.0 && q < 1.0)) {
        throw ValidationError("quantile level must lie in (0, 1)");
    }
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= 0.0 || mid >= 1.0) break;
        if (geo_null_cdf(N, mid) < q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double z_standard_error(std::size_t N, std::size_t T_a, Calibration calibration) {
    require_trials(N);
    if (calibration == Calibration::paper_literal) {
        return std::sqrt(std::exp(-2.0) / static_cast<double>(N));
    }
    if (T_a == 0) {
        throw ValidationError("number of ages must be positive");
    }
    return GeoNull::for_trials(N).sigma / std::sqrt(static_cast<double>(T_a));
}

double z_statistic(std::span<const double> g_means, std::size_t N, Calibration calibration) {
    if (g_means.empty()) {
        throw ValidationError("z statistic needs at least one geometric mean");
    }
    require_trials(N);
    const double g_bar = std::accumulate(g_means.begin(), g_means.end(), 0.0) / static_cast<double>(g_means.size());
    const double center = calibration == Calibration::paper_literal ? std::exp(-1.0) : GeoNull::for_trials(N).mu0;
    return (g_bar - center) / z_standard_error(N, g_means.size(), calibration);
}

double power_lower_tailed(double mu1, std::size_t N, std::size_t T_a, double alpha, Calibration calibration) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("alpha must lie in (0, 1)");
    }
    const double mu0 = calibration == Calibration::paper_literal ? std::exp(-1.0) : GeoNull::for_trials(N).mu0;
    const double se = z_standard_error(N, T_a, calibration);
    return 1.0 - normal_cdf(normal_quantile(1.0 - alpha) - (mu0 - mu1) / se);
}

double gaussianize(double g, std::size_t N, double mu_y, double sigma_y) {
    if (!(sigma_y > 0.0)) {
        throw ValidationError("sigma_y must be positive");
    }
    const double c = geo_null_cdf(N, g);
    // sqrt(2) erfinv(2c - 1) is the standard normal quantile of c. The upper
    // half goes through the complement to keep resolution near g = 1.
    constexpr double tiny = 1e-300;
    if (c <= 0.5) {
        return mu_y + sigma_y * normal_quantile(std::max(c, tiny));
    }
    const double n = static_cast<double>(N);
    const double upper = boost::math::gamma_p(n, -n * std::log(g));
    return mu_y - sigma_y * normal_quantile(std::max(upper, tiny));
}

NormalFit mle_normal_fit(std::span<const double> values) {
    if (values.size() < 3) {
        throw ValidationError("normal fit needs at least three values");
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    if (!(sd > 0.0)) {
        throw ValidationError("normal fit of constant data is degenerate");
    }
    NormalFit fit;
    fit.mean = mean;
    fit.sd = sd;
    fit.gof_p = ks_one_sample(values, [&](double x) { return normal_cdf((x - mean) / sd); }).p_value;
    return fit;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw ValidationError("normal quantile level must lie in (0, 1)");
    }
    static const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, q);
}

}  // namespace xa
