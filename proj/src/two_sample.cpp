#include "xa/two_sample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "xa/errors.hpp"

namespace xa {

namespace {

void require_non_empty(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw ValidationError("two-sample test needs two non-empty samples");
    }
}

double stephens_lambda(double d, double effective_n) {
    const double root = std::sqrt(effective_n);
    return (root + 0.12 + 0.11 / root) * d;
}

// Pooled sample sorted once; permutations only relabel positions.
class PooledLabels {
public:
    PooledLabels(std::span<const double> a, std::span<const double> b) : m_(a.size()), n_(b.size()) {
        std::vector<std::pair<double, bool>> pooled;
        pooled.reserve(m_ + n_);
        for (double x : a) pooled.emplace_back(x, true);
        for (double x : b) pooled.emplace_back(x, false);
        std::sort(pooled.begin(), pooled.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        observed_.resize(pooled.size());
        for (std::size_t i = 0; i < pooled.size(); ++i) {
            observed_[i] = pooled[i].second ? 1 : 0;
            if (i + 1 == pooled.size() || pooled[i].first != pooled[i + 1].first) {
                group_end_.push_back(i);
            }
        }
    }

    [[nodiscard]] std::size_t total() const noexcept { return m_ + n_; }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] const std::vector<unsigned char>& observed() const noexcept { return observed_; }

    // max |cA * n - cB * m| over tie-group ends; D = result / (m n).
    [[nodiscard]] std::int64_t scaled_distance(const std::vector<unsigned char>& is_a) const {
        std::int64_t ca = 0;
        std::int64_t cb = 0;
        std::int64_t best = 0;
        std::size_t next = 0;
        const auto m = static_cast<std::int64_t>(m_);
        const auto n = static_cast<std::int64_t>(n_);
        for (std::size_t i = 0; i < is_a.size(); ++i) {
            if (is_a[i]) ++ca; else ++cb;
            if (group_end_[next] == i) {
                ++next;
                best = std::max<std::int64_t>(best, std::llabs(ca * n - cb * m));
            }
        }
        return best;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<unsigned char> observed_;
    std::vector<std::size_t> group_end_;
};

}  // namespace

std::string_view to_string(TestMethod method) noexcept {
    switch (method) {
    case TestMethod::ks_asymptotic: return "ks_asymptotic";
    case TestMethod::permutation_exact: return "permutation_exact";
    case TestMethod::permutation_monte_carlo: return "permutation_monte_carlo";
    }
    return "unknown";
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    require_non_empty(a, b);
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double m = static_cast<double>(x.size());
    const double n = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
    }
    return d;
}

double kolmogorov_cdf(double z) {
    if (!(z > 0.0)) {
        return 0.0;
    }
    if (z < 1.18) {
        // Jacobi theta form, fast for small z.
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double sum = 0.0;
        for (int k = 1; k < 100; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * pi2 / (8.0 * z * z));
            sum += term;
            if (term < 1e-16 * sum) break;
        }
        return std::min(1.0, std::sqrt(2.0 * std::numbers::pi) / z * sum);
    }
    return 1.0 - kolmogorov_sf(z);
}

double kolmogorov_sf(double z) {
    if (!(z > 0.0)) {
        return 1.0;
    }
    if (z < 1.18) {
        return 1.0 - kolmogorov_cdf(z);
    }
    double sum = 0.0;
    for (int i = 1; i < 100; ++i) {
        const double term = std::exp(-2.0 * i * i * z * z);
        sum += (i % 2 == 1) ? term : -term;
        if (term < 1e-12) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

bool validity_check(std::size_t m, std::size_t n) noexcept {
    if (m == 0 || n == 0) {
        return false;
    }
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return md * nd / (md + nd) > 4.0 && std::min(m, n) > 30;
}

TestOutcome ks_p_value(double d_obs, std::size_t m, std::size_t n) {
    if (!(d_obs >= 0.0 && d_obs <= 1.0)) {
        throw ValidationError("KS statistic must lie in [0, 1]");
    }
    if (m == 0 || n == 0) {
        throw ValidationError("KS p-value needs non-empty samples");
    }
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    TestOutcome out;
    out.statistic = d_obs;
    out.m = m;
    out.n = n;
    out.method = TestMethod::ks_asymptotic;
    out.p_value = std::clamp(kolmogorov_sf(stephens_lambda(d_obs, md * nd / (md + nd))), 0.0, 1.0);
    out.valid = validity_check(m, n);
    return out;
}

TestOutcome ks_test(std::span<const double> a, std::span<const double> b) {
    return ks_p_value(ks_statistic(a, b), a.size(), b.size());
}

std::uint64_t binomial_capped(std::size_t m_plus_n, std::size_t m, std::uint64_t cap) {
    m = std::min(m, m_plus_n - m);
    // C(k, i) built incrementally; every intermediate value is itself a binomial.
    unsigned __int128 c = 1;
    for (std::size_t i = 1; i <= m; ++i) {
        c = c * (m_plus_n - m + i) / i;
        if (c > cap) {
            return cap + 1;
        }
    }
    return static_cast<std::uint64_t>(c);
}

TestOutcome permutation_test(std::span<const double> a, std::span<const double> b, const RngHandle& handle,
                             std::size_t s_max) {
    require_non_empty(a, b);
    if (s_max < 100) {
        throw ValidationError("permutation budget s_max must be at least 100");
    }
    const PooledLabels pooled(a, b);
    const std::int64_t observed = pooled.scaled_distance(pooled.observed());
    const std::size_t total = pooled.total();
    const std::size_t m = pooled.m();

    TestOutcome out;
    out.m = a.size();
    out.n = b.size();
    out.statistic = static_cast<double>(observed) / (static_cast<double>(out.m) * static_cast<double>(out.n));
    out.valid = std::min(out.m, out.n) >= kMinPermutationSample;

    const std::uint64_t relabellings = binomial_capped(total, m, s_max);
    std::vector<unsigned char> labels(total, 0);
    std::uint64_t extreme = 0;

    if (relabellings <= s_max) {
        // Enumerate m-subsets of positions in lexicographic order.
        out.method = TestMethod::permutation_exact;
        std::vector<std::size_t> pick(m);
        for (std::size_t i = 0; i < m; ++i) pick[i] = i;
        for (;;) {
            std::fill(labels.begin(), labels.end(), 0);
            for (std::size_t p : pick) labels[p] = 1;
            if (pooled.scaled_distance(labels) >= observed) ++extreme;
            std::size_t k = m;
            while (k > 0 && pick[k - 1] == total - m + (k - 1)) --k;
            if (k == 0) break;
            ++pick[k - 1];
            for (std::size_t i = k; i < m; ++i) pick[i] = pick[i - 1] + 1;
        }
        out.p_value = static_cast<double>(extreme) / static_cast<double>(relabellings);
        return out;
    }

    out.method = TestMethod::permutation_monte_carlo;
    Rng rng(handle);
    std::vector<std::size_t> index(total);
    for (std::size_t i = 0; i < total; ++i) index[i] = i;
    for (std::size_t s = 0; s < s_max; ++s) {
        // Partial Fisher-Yates: the first m slots form a uniform m-subset.
        for (std::size_t k = 0; k < m; ++k) {
            const auto j = k + static_cast<std::size_t>(rng.below(total - k));
            std::swap(index[k], index[j]);
        }
        std::fill(labels.begin(), labels.end(), 0);
        for (std::size_t k = 0; k < m; ++k) labels[index[k]] = 1;
        if (pooled.scaled_distance(labels) >= observed) ++extreme;
    }
    out.p_value = (1.0 + static_cast<double>(extreme)) / (1.0 + static_cast<double>(s_max));
    return out;
}

OneSampleOutcome ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) {
        throw ValidationError("one-sample KS needs a non-empty sample");
    }
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    OneSampleOutcome out;
    out.statistic = d;
    out.p_value = kolmogorov_sf(stephens_lambda(d, n));
    return out;
}

}  // namespace xa
