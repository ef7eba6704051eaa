#pragma once

#include <cstddef>
#include <vector>

#include "xa/event_core.hpp"
#include "xa/rng.hpp"

namespace xa {

enum class AgingMode {
    sequential,  ///< non-overlapping windows, each restarted at the detected event
    per_event,   ///< one window per event; samples overlap and are dependent
};

/// Waiting times recorded by an observer that is blind for t_a after each
/// reference event; each value is measured from the window end.
struct AgedSample {
    double t_a = 0.0;
    std::vector<double> taus;
    std::size_t n_discarded = 0;  // windows that ran past the last event
    AgingMode mode = AgingMode::sequential;
    bool dependent = false;       // true for per_event output

    [[nodiscard]] std::size_t size() const noexcept { return taus.size(); }
};

/// Pareto-type waiting-time law psi(tau) = (mu-1) theta^(mu-1) / (tau+theta)^mu.
struct ParetoLaw {
    double mu = 2.5;
    double theta = 1.0;

    /// Throws ValidationError unless mu > 1 and theta > 0.
    void validate() const;
    /// theta / (mu - 2); throws UnsupportedRegimeError when mu <= 2.
    [[nodiscard]] double mean() const;
};

/// Ages an event sequence at latency t_a. In sequential mode the first window
/// opens at the first event; t_a == 0 reproduces to_interarrivals exactly.
/// Throws ValidationError for empty input or negative t_a, and
/// EmptySampleError (carrying n_discarded) when no window closes.
[[nodiscard]] AgedSample age_sequence(const EventSequence& events, double t_a,
                                      AgingMode mode = AgingMode::sequential);

/// Same experiment on the events implied by `taus` (first window opens at the
/// event preceding taus[0]). Windows are measured with sums local to each
/// window, so waiting times far below the spacing of doubles at the absolute
/// clock time survive; age_sequence(from_interarrivals(taus, 0, true), t_a)
/// agrees up to rounding.
[[nodiscard]] AgedSample age_intervals(const InterArrivalSequence& taus, double t_a,
                                       AgingMode mode = AgingMode::sequential);

/// Renewal baseline: shuffles the original waiting times and ages the
/// shuffled copy with age_intervals.
[[nodiscard]] AgedSample shuffled_aged(const InterArrivalSequence& taus, double t_a, const RngHandle& rng,
                                       AgingMode mode = AgingMode::sequential);

/// Density of the aged exponential waiting time measured from the window end.
/// Memorylessness makes it lambda * exp(-lambda * tau) for every t_a.
[[nodiscard]] double aged_pdf_exponential(double lambda, double t_a, double tau);

/// Aged Pareto density for 2 < mu < 3 with a stationary renewal rate
/// (mu-2)/theta inside the blind window:
///   (mu-2) theta^(mu-2) [ (tau+theta)^(1-mu) - (t_a+tau+theta)^(1-mu) ].
/// t_a may be +infinity, which gives the limiting Pareto law with exponent mu-1.
[[nodiscard]] double aged_pdf_pareto(const ParetoLaw& law, double t_a, double tau);

/// (theta/(tau+theta))^(mu-1) for a brand-new process, ^(mu-2) when aged.
[[nodiscard]] double survival_pareto(const ParetoLaw& law, double tau, bool aged);

}  // namespace xa
