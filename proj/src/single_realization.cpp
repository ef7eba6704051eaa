#include "xa/single_realization.hpp"

#include <algorithm>
#include <cmath>

#include "xa/aging.hpp"
#include "xa/errors.hpp"
#include "xa/format.hpp"
#include "xa/parallel.hpp"

namespace xa {

namespace {

constexpr std::size_t kMinWindow = 50;
constexpr double kMinAgedPerWindow = 5.0;

std::vector<double> aged_or_empty(const InterArrivalSequence& taus, double t_a) {
    try {
        return age_sequence(from_interarrivals(taus, 0.0, true), t_a).taus;
    } catch (const EmptySampleError&) {
        return {};
    }
}

}  // namespace

std::vector<InterArrivalSequence> split_windows(const InterArrivalSequence& taus, std::size_t t_w,
                                                std::vector<std::string>* warnings) {
    if (t_w == 0 || taus.size() < 2 * t_w) {
        throw ConfigError("need at least two windows: L = " + std::to_string(taus.size()) +
                          " waiting times is less than 2 * t_w = " + std::to_string(2 * t_w));
    }
    const std::size_t n = taus.size() / t_w;
    std::vector<InterArrivalSequence> windows;
    windows.reserve(n);
    const auto& v = taus.values();
    for (std::size_t i = 0; i < n; ++i) {
        windows.emplace_back(std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(i * t_w),
                                                 v.begin() + static_cast<std::ptrdiff_t>((i + 1) * t_w)));
    }
    const std::size_t rest = taus.size() - n * t_w;
    if (rest > 0 && warnings != nullptr) {
        warnings->push_back(std::to_string(rest) + " trailing waiting times discarded (not a full window)");
    }
    return windows;
}

InterArrivalSequence bootstrap_sample(const InterArrivalSequence& taus, std::size_t size, const RngHandle& handle) {
    if (taus.empty()) {
        throw ValidationError("cannot bootstrap from an empty sample");
    }
    Rng rng(handle);
    std::vector<double> out(size);
    for (auto& x : out) x = taus[rng.below(taus.size())];
    return InterArrivalSequence(std::move(out));
}

XAConfig derive_single_config(const InterArrivalSequence& taus, const SingleConfig& config) {
    if (config.t_w < kMinWindow) {
        throw ConfigError("window length t_w must be >= " + std::to_string(kMinWindow));
    }
    if (taus.size() < 2 * config.t_w) {
        throw ConfigError("need at least two windows: L = " + std::to_string(taus.size()) +
                          " waiting times is less than 2 * t_w = " + std::to_string(2 * config.t_w));
    }
    const double L = static_cast<double>(taus.size());
    const double tw = static_cast<double>(config.t_w);
    const double mean = taus.mean();
    const double min_tau = *std::min_element(taus.values().begin(), taus.values().end());

    XAConfig c;
    c.T_a = config.T_a;
    c.N = taus.size() / config.t_w;
    c.method = config.method;
    c.alpha = config.alpha;
    c.seed = config.seed;
    c.s_max = config.s_max;
    c.workers = config.workers;
    c.t_a_max = std::min(L, tw) * mean / 30.0;
    if (c.T_a < 2) throw ConfigError("T_a must be >= 2");
    c.t_a_min = c.t_a_max / static_cast<double>(c.T_a);
    const double step = (c.t_a_max - c.t_a_min) / static_cast<double>(c.T_a - 1);
    if (!(step >= 10.0 * min_tau)) {
        throw ConfigError("age grid step " + format_double(step) + " is below 10x the smallest waiting time " +
                          format_double(min_tau) + "; lower T_a or raise t_w");
    }
    if (expected_aged_count(tw, mean, c.t_a_min) < kMinAgedPerWindow) {
        throw ConfigError("windows too short: fewer than 5 aged samples per window expected at t_a_min");
    }
    c.validate();
    return c;
}

XAResult run_single(const InterArrivalSequence& taus, const SingleConfig& config) {
    XAResult result;
    result.config = derive_single_config(taus, config);
    result.adjust = config.adjust;
    result.single_realization = true;
    const XAConfig& c = result.config;
    const auto windows = split_windows(taus, config.t_w, &result.warnings);
    const auto grid = c.grid();

    result.ages.resize(c.T_a);
    for (std::size_t k = 0; k < c.T_a; ++k) {
        result.ages[k].age_index = k;
        result.ages[k].t_a = grid[k];
        result.ages[k].trials.resize(c.N);
    }
    const RngHandle root(c.seed);
    const std::size_t workers = c.workers == 0 ? default_workers() : c.workers;
    parallel_for(c.T_a * c.N, workers, [&](std::size_t cell) {
        const std::size_t k = cell / c.N;
        const std::size_t i = cell % c.N;
        const RngHandle handle = root.child({k, i});
        const auto b = bootstrap_sample(taus, config.t_w, handle.child(1));
        result.ages[k].trials[i] = compare_aged(aged_or_empty(windows[i], grid[k]), aged_or_empty(b, grid[k]),
                                                c.method, c.s_max, handle.child(3));
    });

    result.warnings.push_back("windows come from one realization and are not fully independent; "
                              "the z test and Fisher combination assume independence");
    finalize_result(result);
    if (config.adjust == Adjust::bonferroni) {
        bool any = false;
        for (const auto& age : result.ages) {
            any = any || (age.valid && age.fisher_p_adjusted < c.alpha);
        }
        result.reject_renewal = any;
    }
    return result;
}

}  // namespace xa
