#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xa/event_core.hpp"
#include "xa/xa_test.hpp"

namespace xa {

struct SingleConfig {
    std::size_t t_w = 500;  // waiting times per window
    std::size_t T_a = 20;
    std::size_t s_max = kDefaultPermutations;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    Adjust adjust = Adjust::none;
    Method method = Method::automatic;  // KS when both aged samples pass validity_check, else permutation
    std::size_t workers = 1;
};

/// Consecutive disjoint blocks of exactly t_w waiting times. A trailing
/// remainder is dropped and reported through `warnings`.
/// Throws ConfigError when fewer than two windows fit.
[[nodiscard]] std::vector<InterArrivalSequence> split_windows(const InterArrivalSequence& taus, std::size_t t_w,
                                                              std::vector<std::string>* warnings = nullptr);

/// `size` draws with replacement from the observed values.
[[nodiscard]] InterArrivalSequence bootstrap_sample(const InterArrivalSequence& taus, std::size_t size,
                                                    const RngHandle& rng);

/// Engine configuration implied by the data: N = floor(L / t_w),
/// t_a_max = min(L, t_w) mean_tau / 30, t_a_min = t_a_max / T_a.
/// Throws ConfigError when t_w < 50, N < 2, the grid step is below 10x the
/// smallest waiting time, or fewer than 5 aged samples per window are
/// expected at t_a_min.
[[nodiscard]] XAConfig derive_single_config(const InterArrivalSequence& taus, const SingleConfig& config);

/// Approximate XA test on one realization: window i ages against a fresh
/// bootstrap sequence of t_w draws at every age. With Bonferroni adjustment
/// the verdict is "some adjusted Fisher p < alpha"; otherwise it is the z test.
[[nodiscard]] XAResult run_single(const InterArrivalSequence& taus, const SingleConfig& config);

}  // namespace xa
