#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "xa/errors.hpp"
#include "xa/meta_analysis.hpp"
#include "xa/rng.hpp"

using namespace xa;

namespace {

std::vector<double> uniforms(Rng& r, std::size_t n) {
    std::vector<double> u(n);
    for (auto& v : u) v = r.uniform_open();
    return u;
}

double geo_mean_direct(const std::vector<double>& p) {
    double prod = 1.0;
    for (double v : p) prod *= v;
    return std::pow(prod, 1.0 / static_cast<double>(p.size()));
}

}  // namespace

TEST_SUITE("meta_analysis") {
    TEST_CASE("geometric mean") {
        CHECK(geometric_mean(std::vector<double>{1, 1, 1}) == doctest::Approx(1.0));
        CHECK(geometric_mean(std::vector<double>{0.25, 1}) == doctest::Approx(0.5));
        CHECK_THROWS_AS((void)geometric_mean(std::vector<double>{}), ValidationError);
        CHECK_THROWS_AS((void)geometric_mean(std::vector<double>{0.5, 1.5}), ValidationError);
        std::vector<std::string> warnings;
        const double g = geometric_mean(std::vector<double>{0.0, 1.0}, &warnings);
        CHECK(g == doctest::Approx(std::sqrt(kPValueFloor)));
        CHECK(warnings.size() == 1);

        Rng r(RngHandle(6));
        for (int rep = 0; rep < 100; ++rep) {
            const auto p = uniforms(r, 1 + r.below(30));
            const double gm = geometric_mean(p);
            CHECK(gm == doctest::Approx(geo_mean_direct(p)).epsilon(1e-12));
            CHECK(gm <= oracle::mean(p) + 1e-15);
        }
    }

    TEST_CASE("Monte Carlo mean of geometric means of ten uniforms") {
        Rng r(RngHandle(7));
        double total = 0.0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) total += geometric_mean(uniforms(r, 10));
        CHECK(std::abs(total / draws - std::pow(1.1, -10.0)) < 0.002);
    }

    TEST_CASE("Fisher combination") {
        CHECK(fisher_combine(std::vector<double>{1.0}) == doctest::Approx(1.0));
        for (double p : {0.001, 0.2, 0.5, 0.93}) CHECK(fisher_combine(std::vector<double>{p}) == doctest::Approx(p).epsilon(1e-12));
        CHECK_THROWS_AS((void)fisher_combine(std::vector<double>{}), ValidationError);
        Rng r(RngHandle(8));
        for (int rep = 0; rep < 50; ++rep) {
            const auto p = uniforms(r, 1 + r.below(60));
            double x = 0.0;
            for (double v : p) x -= 2.0 * std::log(v);
            CHECK(fisher_combine(p) == doctest::Approx(oracle::chi2_sf_even(x, p.size())).epsilon(1e-10));
        }
    }

    TEST_CASE("Fisher p increases with the geometric mean at fixed N") {
        Rng r(RngHandle(9));
        std::vector<std::pair<double, double>> pairs;
        for (int rep = 0; rep < 200; ++rep) {
            const auto p = uniforms(r, 12);
            pairs.emplace_back(geometric_mean(p), fisher_combine(p));
        }
        std::sort(pairs.begin(), pairs.end());
        for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i].second >= pairs[i - 1].second);
    }

    TEST_CASE("Fisher p is uniform under the null") {
        Rng r(RngHandle(10));
        std::vector<double> f;
        for (int s = 0; s < 500; ++s) f.push_back(fisher_combine(uniforms(r, 100)));
        CHECK(oracle::ks_one_sample_p(oracle::uniform_ks_distance(f), f.size()) > 0.01);
    }

    TEST_CASE("null law of the geometric mean") {
        for (double g : {0.05, 0.3, 0.77}) CHECK(geo_null_pdf(1, g) == doctest::Approx(1.0));
        for (std::size_t N : {2, 5, 10, 100}) {
            const auto pdf = [N](double g) { return geo_null_pdf(N, g); };
            const double mass = oracle::integrate_singular(pdf, 0.0, 1.0);
            CHECK(std::abs(mass - 1.0) < 1e-8);
            const double m1 = oracle::integrate_singular([&](double g) { return g * pdf(g); }, 0.0, 1.0);
            const double m2 = oracle::integrate_singular([&](double g) { return g * g * pdf(g); }, 0.0, 1.0);
            const double n = static_cast<double>(N);
            const double mu0 = std::pow(1 + 1 / n, -n);
            const double var = std::pow(1 + 2 / n, -n) - std::pow(1 + 1 / n, -2 * n);
            CHECK(std::abs(m1 - mu0) < 1e-8);
            CHECK(std::abs(m2 - m1 * m1 - var) < 1e-8);
            const auto null = GeoNull::for_trials(N);
            CHECK(null.mu0 == doctest::Approx(mu0).epsilon(1e-14));
            CHECK(null.sigma == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
            // The CDF is the integral of the density.
            for (double g : {0.1, 0.35, 0.6, 0.9})
                CHECK(std::abs(geo_null_cdf(N, g) - oracle::integrate_singular(pdf, 0.0, g)) < 1e-8);
        }
        CHECK_THROWS_AS((void)geo_null_pdf(0, 0.5), ValidationError);
        CHECK_THROWS_AS((void)geo_null_cdf(3, 1.5), ValidationError);
        CHECK_THROWS_AS((void)geo_null_quantile(3, 1.0), ValidationError);
    }

    TEST_CASE("null moments approach 1/e") {
        const auto big = GeoNull::for_trials(100000);
        CHECK(big.mu0 == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
        CHECK(big.sigma * std::sqrt(100000.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
    }

    TEST_CASE("quantile inverts the CDF") {
        for (std::size_t N : {10, 100})
            for (double q : {0.025, 0.5, 0.975}) CHECK(std::abs(geo_null_cdf(N, geo_null_quantile(N, q)) - q) < 1e-8);
        // Reference: Q(10, 10 log(1/0.3)) from scipy.special.gammaincc.
        CHECK(geo_null_cdf(10, 0.3) == doctest::Approx(0.2389385815204143).epsilon(1e-12));
    }

    TEST_CASE("Monte Carlo geometric means follow the null CDF") {
        Rng r(RngHandle(11));
        std::vector<double> g(20000);
        for (auto& v : g) v = geometric_mean(uniforms(r, 10));
        const double d = oracle::cdf_ks_distance(g, [](double x) { return geo_null_cdf(10, x); });
        CHECK(oracle::ks_one_sample_p(d, g.size()) > 0.01);
    }

    TEST_CASE("z statistic") {
        const std::vector<double> at_e(5, std::exp(-1.0));
        CHECK(z_statistic(at_e, 100, Calibration::paper_literal) == doctest::Approx(0.0));
        const auto null = GeoNull::for_trials(50);
        const std::vector<double> at_mu(7, null.mu0);
        CHECK(z_statistic(at_mu, 50, Calibration::stripe_calibrated) == doctest::Approx(0.0));
        CHECK_THROWS_AS((void)z_statistic(std::vector<double>{}, 50, Calibration::stripe_calibrated), ValidationError);
        // Stripe-calibrated Z: (g - mu0) sqrt(T_a) / sigma.
        const std::vector<double> g{0.3, 0.4};
        CHECK(z_statistic(g, 50, Calibration::stripe_calibrated) ==
              doctest::Approx((0.35 - null.mu0) * std::sqrt(2.0) / null.sigma));
        CHECK(z_statistic(g, 50, Calibration::paper_literal) ==
              doctest::Approx((0.35 - std::exp(-1.0)) / std::sqrt(std::exp(-2.0) / 50)));
    }

    TEST_CASE("stripe-calibrated Z is standard normal under the null") {
        Rng r(RngHandle(12));
        std::vector<double> z;
        for (int rep = 0; rep < 1000; ++rep) {
            std::vector<double> g(20);
            for (auto& v : g) v = geometric_mean(uniforms(r, 100));
            z.push_back(z_statistic(g, 100, Calibration::stripe_calibrated));
        }
        const double d = oracle::cdf_ks_distance(z, oracle::phi);
        CHECK(oracle::ks_one_sample_p(d, z.size()) > 0.01);
    }

    TEST_CASE("power of the lower-tailed z test") {
        const auto null = GeoNull::for_trials(100);
        CHECK(power_lower_tailed(null.mu0, 100, 100, 0.05) == doctest::Approx(0.05).epsilon(1e-10));
        CHECK(power_lower_tailed(1e-9, 10, 10, 0.05) == doctest::Approx(1.0));
        double prev = 0.0;
        for (std::size_t N : {10, 20, 50, 100, 200, 500}) {
            const double p = power_lower_tailed(0.35, N, 20, 0.05);
            CHECK(p >= prev);
            prev = p;
        }
        prev = 0.0;
        for (std::size_t T : {2, 5, 10, 20, 50, 100}) {
            const double p = power_lower_tailed(0.36, 100, T, 0.05);
            CHECK(p >= prev);
            prev = p;
        }
        // Closed form written out with the standard error of the mean.
        const double se = null.sigma / std::sqrt(20.0);
        const double z95 = 1.6448536269514722;
        CHECK(power_lower_tailed(0.35, 100, 20, 0.05) ==
              doctest::Approx(1.0 - oracle::phi(z95 - (null.mu0 - 0.35) / se)).epsilon(1e-9));
    }

    TEST_CASE("gaussianize") {
        const double median = geo_null_quantile(30, 0.5);
        CHECK(gaussianize(median, 30, 2.0, 3.0) == doctest::Approx(2.0).epsilon(1e-8));
        double prev = -1e300;
        for (double g = 0.05; g < 0.95; g += 0.01) {
            const double h = gaussianize(g, 30, 0.0, 1.0);
            CHECK(h > prev);
            prev = h;
        }
        CHECK(std::isfinite(gaussianize(1e-12, 30, 0.0, 1.0)));
        CHECK(std::isfinite(gaussianize(1.0 - 1e-12, 30, 0.0, 1.0)));

        Rng r(RngHandle(13));
        std::vector<double> h(10000);
        for (auto& v : h) v = gaussianize(geometric_mean(uniforms(r, 30)), 30, 0.0, 1.0);
        CHECK(oracle::ks_one_sample_p(oracle::cdf_ks_distance(h, oracle::phi), h.size()) > 0.01);
        const auto fit = mle_normal_fit(h);
        const double se = 1.0 / std::sqrt(static_cast<double>(h.size()));
        CHECK(std::abs(fit.mean) < 3 * se);
        CHECK(std::abs(fit.sd - 1.0) < 3 * se / std::sqrt(2.0));
    }

    TEST_CASE("normal fit") {
        const auto fit = mle_normal_fit(std::vector<double>{-1, 0, 1});
        CHECK(fit.mean == doctest::Approx(0.0));
        CHECK(fit.sd == doctest::Approx(std::sqrt(2.0 / 3.0)));
        CHECK_THROWS_AS((void)mle_normal_fit(std::vector<double>{2, 2, 2}), ValidationError);
        CHECK_THROWS_AS((void)mle_normal_fit(std::vector<double>{1, 2}), ValidationError);
    }

    TEST_CASE("gaussianized null draws fit a normal in most seeds") {
        int passes = 0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            Rng r(RngHandle(400 + s));
            std::vector<double> h(200);
            for (auto& v : h) v = gaussianize(geometric_mean(uniforms(r, 20)), 20, 0.0, 1.0);
            if (mle_normal_fit(h).gof_p > 0.05) ++passes;
        }
        CHECK(passes >= 45);
    }

    TEST_CASE("normal helpers") {
        CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
        CHECK(normal_quantile(0.05) == doctest::Approx(-1.6448536269514722).epsilon(1e-10));
        for (double x : {-3.0, -0.5, 0.7, 2.2}) CHECK(normal_cdf(x) == doctest::Approx(oracle::phi(x)).epsilon(1e-14));
    }
}
