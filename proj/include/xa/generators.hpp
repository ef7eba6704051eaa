#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xa/aging.hpp"
#include "xa/event_core.hpp"
#include "xa/rng.hpp"

namespace xa {

// ----------------------------------------------------------------------------
// Renewal processes

/// n iid exponential(lambda) waiting times.
[[nodiscard]] InterArrivalSequence gen_poisson(double lambda, std::size_t n, const RngHandle& rng);

/// n iid Pareto waiting times by inversion of the survival function:
/// tau = theta (u^(-1/(mu-1)) - 1).
[[nodiscard]] InterArrivalSequence gen_pareto_renewal(const ParetoLaw& law, std::size_t n, const RngHandle& rng);

/// Inverse survival map used by gen_pareto_renewal, exposed for testing.
[[nodiscard]] double pareto_inverse_survival(const ParetoLaw& law, double u);

// ----------------------------------------------------------------------------
// Non-renewal processes built on a stationary AR(1) chain X (c = 0, unit
// normal innovations, X_0 drawn from N(0, 1/(1-beta^2))).

/// Lambda_s = |X_s|.
[[nodiscard]] InterArrivalSequence gen_abs_ar1(double beta, std::size_t n, const RngHandle& rng);

/// Delta_s = scale * exp(X_s). Mean interval is scale * exp(1/(2(1-beta^2))).
[[nodiscard]] InterArrivalSequence gen_exp_ar1(double beta, std::size_t n, const RngHandle& rng,
                                               double scale = 1.0);

/// E[exp(X)] for the stationary chain used by gen_exp_ar1.
[[nodiscard]] double exp_ar1_mean(double beta);

/// Delta_t = exp(z_t sigma_t), sigma_t = b sigma_{t-1} + s eps_t. z and eps
/// use separate substreams (children 0 and 1 of `rng`).
[[nodiscard]] InterArrivalSequence gen_stoch_vol(double b, double s, std::size_t n, const RngHandle& rng);

struct HawkesRealization {
    EventSequence events;
    bool stationary = true;  // alpha < beta
};

/// Exponential-kernel Hawkes process on (0, horizon] by Ogata thinning.
/// lambda(t) = lambda0 + sum_{t_j < t} alpha exp(-beta (t - t_j)).
[[nodiscard]] HawkesRealization gen_hawkes(double lambda0, double alpha, double beta, double horizon,
                                           const RngHandle& rng);

/// Sorted merge. Coinciding timestamps are rejected unless jitter > 0, in
/// which case the merged times receive uniform (0, jitter) noise.
[[nodiscard]] EventSequence gen_superposition(const EventSequence& a, const EventSequence& b, double jitter = 0.0,
                                              const RngHandle& rng = RngHandle{});

struct PolyaUrnDraws {
    std::vector<std::uint8_t> draws;  // 1 = colour A
    EventSequence events;             // event at time i+1 for every draw i of colour A
};

/// Draw-and-reinforce urn starting with a0 balls of colour A and b0 of colour B.
[[nodiscard]] PolyaUrnDraws gen_polya_urn(std::size_t a0, std::size_t b0, std::size_t n, const RngHandle& rng);

struct AcfResult {
    std::vector<double> values;  // lags 0..max_lag
    double bound = 0.0;          // 1.96 / sqrt(length)
};

/// Biased-normalised sample autocorrelation.
[[nodiscard]] AcfResult acf(std::span<const double> series, std::size_t max_lag);

// ----------------------------------------------------------------------------
// Serializable generator description used by the CLI and the XA engine.

enum class GeneratorKind { poisson, pareto_renewal, abs_ar1, exp_ar1, stoch_vol, hawkes, superposition, polya_urn };

[[nodiscard]] std::string_view to_string(GeneratorKind kind) noexcept;
[[nodiscard]] GeneratorKind generator_kind_from_string(std::string_view s);

/// Kind plus named real parameters. Length is either an event count `n`
/// or a time `horizon` (Hawkes and superposition use the horizon).
///
/// Parameter names: poisson {lambda}; pareto_renewal {mu, theta};
/// abs_ar1 {beta}; exp_ar1 {beta, scale | rate}; stoch_vol {b, s};
/// hawkes {lambda0, alpha, beta}; superposition {lambda_a, rate_b, beta_b}
/// (Poisson A pooled with an exp_ar1 B); polya_urn {a0, b0}.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::poisson;
    std::map<std::string, double> params;
    std::size_t n = 0;
    double horizon = 0.0;

    /// Throws ValidationError naming the violated admissibility rule.
    void validate() const;
    [[nodiscard]] double param(const std::string& name) const;
    [[nodiscard]] double param_or(const std::string& name, double fallback) const;

    /// Flat key/value echo (kind, n, horizon and each parameter).
    [[nodiscard]] std::map<std::string, std::string> to_key_values() const;
    [[nodiscard]] static GeneratorSpec from_key_values(const std::map<std::string, std::string>& kv);
};

/// One realization as events (anchored with an event at time 0 for the
/// interval-based kinds).
[[nodiscard]] EventSequence generate_events(const GeneratorSpec& spec, const RngHandle& rng);

/// One realization as waiting times. Interval kinds draw them directly, so
/// no precision is lost to absolute clock times; event kinds difference
/// their timestamps (fewer than two events give an empty sequence).
[[nodiscard]] InterArrivalSequence generate_intervals(const GeneratorSpec& spec, const RngHandle& rng);

/// Expected event count and mean waiting time when known in closed form.
struct SourceMoments {
    std::optional<double> event_count;
    std::optional<double> mean_tau;
};
[[nodiscard]] SourceMoments analytic_moments(const GeneratorSpec& spec);

}  // namespace xa
