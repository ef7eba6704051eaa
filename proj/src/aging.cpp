#include "xa/aging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xa/errors.hpp"

namespace xa {

void ParetoLaw::validate() const {
    if (!(mu > 1.0) || !std::isfinite(mu)) {
        throw ValidationError("Pareto law needs mu > 1");
    }
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw ValidationError("Pareto law needs theta > 0");
    }
}

double ParetoLaw::mean() const {
    validate();
    if (mu <= 2.0) {
        throw UnsupportedRegimeError("Pareto mean is infinite for mu <= 2");
    }
    return theta / (mu - 2.0);
}

AgedSample age_sequence(const EventSequence& events, double t_a, AgingMode mode) {
    if (events.empty()) {
        throw ValidationError("cannot age an empty event sequence");
    }
    if (!(t_a >= 0.0) || !std::isfinite(t_a)) {
        throw ValidationError("latency t_a must be finite and non-negative");
    }
    AgedSample out;
    out.t_a = t_a;
    out.mode = mode;
    out.dependent = mode == AgingMode::per_event;

    const auto t = events.times();
    if (mode == AgingMode::sequential) {
        out.taus.reserve(t.size());
        auto pos = t.begin();
        double start = *pos;
        for (;;) {
            const double end = start + t_a;
            pos = std::upper_bound(pos, t.end(), end);
            if (pos == t.end()) {
                ++out.n_discarded;
                break;
            }
            out.taus.push_back(*pos - end);
            start = *pos;
        }
    } else {
        out.taus.reserve(t.size());
        auto pos = t.begin();
        for (double ti : t) {
            const double end = ti + t_a;
            pos = std::upper_bound(pos, t.end(), end);
            if (pos == t.end()) {
                ++out.n_discarded;
                continue;
            }
            out.taus.push_back(*pos - end);
        }
    }
    if (out.taus.empty()) {
        throw EmptySampleError("latency " + std::to_string(t_a) + " leaves no aged waiting times",
                               out.n_discarded);
    }
    return out;
}

AgedSample age_intervals(const InterArrivalSequence& taus, double t_a, AgingMode mode) {
    if (taus.empty()) {
        throw ValidationError("cannot age an empty waiting-time sequence");
    }
    if (!(t_a >= 0.0) || !std::isfinite(t_a)) {
        throw ValidationError("latency t_a must be finite and non-negative");
    }
    AgedSample out;
    out.t_a = t_a;
    out.mode = mode;
    out.dependent = mode == AgingMode::per_event;
    const auto v = taus.taus();
    const std::size_t n = v.size();

    // Waiting time from the end of a window opened at event `start` to the
    // first later event, and the index of that event; npos when none.
    auto detect = [&](std::size_t start, std::size_t& next) {
        double acc = 0.0;
        std::size_t i = start;
        while (acc <= t_a) {
            if (i == n) return -1.0;
            acc += v[i++];
        }
        next = i;
        return acc - t_a;
    };

    out.taus.reserve(n);
    if (mode == AgingMode::sequential) {
        std::size_t start = 0;
        for (;;) {
            std::size_t next = 0;
            const double w = detect(start, next);
            if (w < 0.0) {
                ++out.n_discarded;
                break;
            }
            out.taus.push_back(w);
            start = next;
        }
    } else {
        for (std::size_t start = 0; start <= n; ++start) {
            std::size_t next = 0;
            const double w = detect(start, next);
            if (w < 0.0) {
                ++out.n_discarded;
            } else {
                out.taus.push_back(w);
            }
        }
    }
    if (out.taus.empty()) {
        throw EmptySampleError("latency " + std::to_string(t_a) + " leaves no aged waiting times",
                               out.n_discarded);
    }
    return out;
}

AgedSample shuffled_aged(const InterArrivalSequence& taus, double t_a, const RngHandle& rng, AgingMode mode) {
    return age_intervals(shuffle(taus, rng), t_a, mode);
}

double aged_pdf_exponential(double lambda, double t_a, double tau) {
    if (!(lambda > 0.0)) {
        throw ValidationError("exponential rate must be positive");
    }
    if (!(t_a >= 0.0) || !(tau >= 0.0)) {
        throw ValidationError("t_a and tau must be non-negative");
    }
    return lambda * std::exp(-lambda * tau);
}

double aged_pdf_pareto(const ParetoLaw& law, double t_a, double tau) {
    law.validate();
    if (!(law.mu > 2.0 && law.mu < 3.0)) {
        throw UnsupportedRegimeError("aged Pareto density is only available for 2 < mu < 3");
    }
    if (!(t_a >= 0.0) || !(tau >= 0.0)) {
        throw ValidationError("t_a and tau must be non-negative");
    }
    const double mu = law.mu;
    const double theta = law.theta;
    const double prefactor = (mu - 2.0) * std::pow(theta, mu - 2.0);
    const double young = std::pow(tau + theta, 1.0 - mu);
    const double old = std::isinf(t_a) ? 0.0 : std::pow(t_a + tau + theta, 1.0 - mu);
    return prefactor * (young - old);
}

double survival_pareto(const ParetoLaw& law, double tau, bool aged) {
    law.validate();
    if (!(tau >= 0.0)) {
        throw ValidationError("tau must be non-negative");
    }
    if (aged && !(law.mu > 2.0)) {
        throw ValidationError("aged survival needs mu > 2");
    }
    const double exponent = aged ? law.mu - 2.0 : law.mu - 1.0;
    return std::pow(law.theta / (tau + law.theta), exponent);
}

}  // namespace xa
