#include "xa/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "xa/errors.hpp"
#include "xa/format.hpp"

namespace xa {

namespace {

void require_stationary(double beta, const char* name) {
    if (!(std::abs(beta) < 1.0)) {
        throw ValidationError(std::string("non-stationary AR(1): |") + name + "| must be < 1");
    }
}

// Smallest positive interval; a draw of exactly zero would break simplicity.
double positive(double x) {
    return x > 0.0 ? x : std::nextafter(0.0, 1.0);
}

class Ar1Chain {
public:
    Ar1Chain(double beta, double innovation_sd, const RngHandle& handle)
        : beta_(beta), sd_(innovation_sd), rng_(handle) {
        x_ = rng_.normal() * sd_ / std::sqrt(1.0 - beta_ * beta_);
        first_ = true;
    }

    double next() {
        if (first_) {
            first_ = false;
            return x_;
        }
        x_ = beta_ * x_ + sd_ * rng_.normal();
        return x_;
    }

private:
    double beta_;
    double sd_;
    Rng rng_;
    double x_ = 0.0;
    bool first_ = true;
};

// Interval source shared by the count- and horizon-driven entry points.
class IntervalSource {
public:
    IntervalSource(const GeneratorSpec& spec, const RngHandle& handle) : spec_(spec), rng_(handle) {
        switch (spec.kind) {
        case GeneratorKind::abs_ar1:
        case GeneratorKind::exp_ar1:
            chain_.emplace_back(spec.param("beta"), 1.0, handle.child(0));
            break;
        case GeneratorKind::stoch_vol:
            chain_.emplace_back(spec.param("b"), spec.param("s"), handle.child(1));
            z_rng_.emplace_back(handle.child(0));
            break;
        default:
            break;
        }
        if (spec.kind == GeneratorKind::exp_ar1) {
            scale_ = exp_ar1_scale(spec);
        }
    }

    static double exp_ar1_scale(const GeneratorSpec& spec) {
        if (spec.params.count("rate") != 0) {
            return 1.0 / (spec.param("rate") * exp_ar1_mean(spec.param("beta")));
        }
        return spec.param_or("scale", 1.0);
    }

    double next() {
        switch (spec_.kind) {
        case GeneratorKind::poisson:
            return positive(rng_.exponential(spec_.param("lambda")));
        case GeneratorKind::pareto_renewal:
            return positive(pareto_inverse_survival({spec_.param("mu"), spec_.param("theta")}, rng_.uniform_open()));
        case GeneratorKind::abs_ar1:
            return positive(std::abs(chain_.front().next()));
        case GeneratorKind::exp_ar1:
            return positive(scale_ * std::exp(chain_.front().next()));
        case GeneratorKind::stoch_vol: {
            const double sigma = chain_.front().next();
            return positive(std::exp(z_rng_.front().normal() * sigma));
        }
        default:
            throw ValidationError("generator kind does not produce an interval sequence");
        }
    }

private:
    const GeneratorSpec& spec_;
    Rng rng_;
    std::vector<Ar1Chain> chain_;
    std::vector<Rng> z_rng_;
    double scale_ = 1.0;
};

GeneratorSpec interval_spec(GeneratorKind kind, std::map<std::string, double> params) {
    GeneratorSpec spec;
    spec.kind = kind;
    spec.params = std::move(params);
    spec.n = 1;
    spec.validate();
    return spec;
}

InterArrivalSequence draw_intervals(const GeneratorSpec& spec, std::size_t n, const RngHandle& handle) {
    IntervalSource source(spec, handle);
    std::vector<double> taus(n);
    for (auto& t : taus) t = source.next();
    return InterArrivalSequence(std::move(taus));
}

EventSequence intervals_until(const GeneratorSpec& spec, double horizon, bool anchor, const RngHandle& handle) {
    IntervalSource source(spec, handle);
    std::vector<double> times;
    if (anchor) times.push_back(0.0);
    double t = 0.0;
    for (;;) {
        t += source.next();
        if (t > horizon) break;
        times.push_back(t);
    }
    return EventSequence(std::move(times), 0.0);
}

bool is_interval_kind(GeneratorKind kind) {
    return kind == GeneratorKind::poisson || kind == GeneratorKind::pareto_renewal ||
           kind == GeneratorKind::abs_ar1 || kind == GeneratorKind::exp_ar1 || kind == GeneratorKind::stoch_vol;
}

}  // namespace

InterArrivalSequence gen_poisson(double lambda, std::size_t n, const RngHandle& rng) {
    return draw_intervals(interval_spec(GeneratorKind::poisson, {{"lambda", lambda}}), n, rng);
}

double pareto_inverse_survival(const ParetoLaw& law, double u) {
    // theta (u^(-1/(mu-1)) - 1), written with expm1 so u near 1 stays positive.
    return law.theta * std::expm1(-std::log(u) / (law.mu - 1.0));
}

InterArrivalSequence gen_pareto_renewal(const ParetoLaw& law, std::size_t n, const RngHandle& rng) {
    return draw_intervals(interval_spec(GeneratorKind::pareto_renewal, {{"mu", law.mu}, {"theta", law.theta}}), n,
                          rng);
}

InterArrivalSequence gen_abs_ar1(double beta, std::size_t n, const RngHandle& rng) {
    return draw_intervals(interval_spec(GeneratorKind::abs_ar1, {{"beta", beta}}), n, rng);
}

InterArrivalSequence gen_exp_ar1(double beta, std::size_t n, const RngHandle& rng, double scale) {
    return draw_intervals(interval_spec(GeneratorKind::exp_ar1, {{"beta", beta}, {"scale", scale}}), n, rng);
}

double exp_ar1_mean(double beta) {
    require_stationary(beta, "beta");
    return std::exp(1.0 / (2.0 * (1.0 - beta * beta)));
}

InterArrivalSequence gen_stoch_vol(double b, double s, std::size_t n, const RngHandle& rng) {
    return draw_intervals(interval_spec(GeneratorKind::stoch_vol, {{"b", b}, {"s", s}}), n, rng);
}

HawkesRealization gen_hawkes(double lambda0, double alpha, double beta, double horizon, const RngHandle& handle) {
    if (!(lambda0 > 0.0)) throw ValidationError("Hawkes baseline lambda0 must be > 0");
    if (!(alpha >= 0.0)) throw ValidationError("Hawkes jump alpha must be >= 0");
    if (!(beta > 0.0)) throw ValidationError("Hawkes decay beta must be > 0");
    if (!(horizon > 0.0)) throw ValidationError("Hawkes horizon must be > 0");

    Rng rng(handle);
    std::vector<double> times;
    double t = 0.0;
    double excess = 0.0;  // sum of alpha exp(-beta (t - t_j)) at the current time
    for (;;) {
        // Intensity only decays between events, so lambda(t+) bounds it until the next one.
        const double bound = lambda0 + excess;
        const double wait = rng.exponential(bound);
        t += wait;
        if (t > horizon) break;
        excess *= std::exp(-beta * wait);
        if (rng.uniform() * bound <= lambda0 + excess) {
            if (times.empty() || t > times.back()) {
                times.push_back(t);
            }
            excess += alpha;
        }
    }
    return {EventSequence(std::move(times), 0.0), alpha < beta};
}

EventSequence gen_superposition(const EventSequence& a, const EventSequence& b, double jitter,
                                const RngHandle& handle) {
    std::vector<double> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.times().begin(), a.times().end(), b.times().begin(), b.times().end(), std::back_inserter(merged));
    const double origin = std::min(a.origin(), b.origin());
    if (jitter > 0.0) {
        Rng rng(handle);
        for (double& t : merged) t += jitter * rng.uniform_open();
        std::sort(merged.begin(), merged.end());
    } else if (std::adjacent_find(merged.begin(), merged.end()) != merged.end()) {
        throw ValidationError("superposition produced coinciding timestamps; enable jitter to break ties");
    }
    return EventSequence(std::move(merged), origin);
}

PolyaUrnDraws gen_polya_urn(std::size_t a0, std::size_t b0, std::size_t n, const RngHandle& handle) {
    if (a0 < 1 || b0 < 1) {
        throw ValidationError("Polya urn needs at least one ball of each colour");
    }
    Rng rng(handle);
    PolyaUrnDraws out;
    out.draws.reserve(n);
    std::vector<double> times;
    std::uint64_t a = a0;
    std::uint64_t b = b0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool is_a = rng.below(a + b) < a;
        out.draws.push_back(is_a ? 1 : 0);
        if (is_a) {
            ++a;
            times.push_back(static_cast<double>(i + 1));
        } else {
            ++b;
        }
    }
    out.events = EventSequence(std::move(times), 0.0);
    return out;
}

AcfResult acf(std::span<const double> series, std::size_t max_lag) {
    if (max_lag < 1 || series.size() <= max_lag) {
        throw ValidationError("acf needs 1 <= max_lag < series length");
    }
    const double n = static_cast<double>(series.size());
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
    double denom = 0.0;
    for (double x : series) denom += (x - mean) * (x - mean);
    if (!(denom > 0.0)) {
        throw ValidationError("acf of a constant series is undefined");
    }
    AcfResult out;
    out.values.resize(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = 0; t + k < series.size(); ++t) {
            s += (series[t] - mean) * (series[t + k] - mean);
        }
        out.values[k] = s / denom;
    }
    out.bound = 1.96 / std::sqrt(n);
    return out;
}

// ----------------------------------------------------------------------------

std::string_view to_string(GeneratorKind kind) noexcept {
    switch (kind) {
    case GeneratorKind::poisson: return "poisson";
    case GeneratorKind::pareto_renewal: return "pareto_renewal";
    case GeneratorKind::abs_ar1: return "abs_ar1";
    case GeneratorKind::exp_ar1: return "exp_ar1";
    case GeneratorKind::stoch_vol: return "stoch_vol";
    case GeneratorKind::hawkes: return "hawkes";
    case GeneratorKind::superposition: return "superposition";
    case GeneratorKind::polya_urn: return "polya_urn";
    }
    return "unknown";
}

GeneratorKind generator_kind_from_string(std::string_view s) {
    for (auto k : {GeneratorKind::poisson, GeneratorKind::pareto_renewal, GeneratorKind::abs_ar1,
                   GeneratorKind::exp_ar1, GeneratorKind::stoch_vol, GeneratorKind::hawkes,
                   GeneratorKind::superposition, GeneratorKind::polya_urn}) {
        if (to_string(k) == s) return k;
    }
    throw ValidationError("unknown generator kind '" + std::string(s) + "'");
}

double GeneratorSpec::param(const std::string& name) const {
    const auto it = params.find(name);
    if (it == params.end()) {
        throw ValidationError("generator '" + std::string(to_string(kind)) + "' needs parameter '" + name + "'");
    }
    return it->second;
}

double GeneratorSpec::param_or(const std::string& name, double fallback) const {
    const auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

void GeneratorSpec::validate() const {
    const bool needs_horizon = kind == GeneratorKind::hawkes || kind == GeneratorKind::superposition;
    if (needs_horizon && !(horizon > 0.0)) {
        throw ValidationError(std::string(to_string(kind)) + " needs a positive horizon");
    }
    if (!needs_horizon && n < 1 && !(horizon > 0.0)) {
        throw ValidationError("generator length must be n >= 1 or a positive horizon");
    }
    switch (kind) {
    case GeneratorKind::poisson:
        if (!(param("lambda") > 0.0)) throw ValidationError("poisson rate lambda must be > 0");
        break;
    case GeneratorKind::pareto_renewal:
        if (!(param("mu") > 1.0)) throw ValidationError("pareto_renewal tail exponent mu must be > 1");
        if (!(param("theta") > 0.0)) throw ValidationError("pareto_renewal scale theta must be > 0");
        break;
    case GeneratorKind::abs_ar1:
        require_stationary(param("beta"), "beta");
        break;
    case GeneratorKind::exp_ar1:
        require_stationary(param("beta"), "beta");
        if (params.count("rate") != 0 && !(param("rate") > 0.0)) throw ValidationError("exp_ar1 rate must be > 0");
        if (!(param_or("scale", 1.0) > 0.0)) throw ValidationError("exp_ar1 scale must be > 0");
        break;
    case GeneratorKind::stoch_vol:
        require_stationary(param("b"), "b");
        if (!(param("s") > 0.0)) throw ValidationError("stoch_vol innovation scale s must be > 0");
        break;
    case GeneratorKind::hawkes:
        if (!(param("lambda0") > 0.0)) throw ValidationError("hawkes baseline lambda0 must be > 0");
        if (!(param("alpha") >= 0.0)) throw ValidationError("hawkes jump alpha must be >= 0");
        if (!(param("beta") > 0.0)) throw ValidationError("hawkes decay beta must be > 0");
        break;
    case GeneratorKind::superposition:
        if (!(param("lambda_a") > 0.0)) throw ValidationError("superposition Poisson rate lambda_a must be > 0");
        if (!(param("rate_b") > 0.0)) throw ValidationError("superposition rate_b must be > 0");
        require_stationary(param_or("beta_b", 0.674), "beta_b");
        break;
    case GeneratorKind::polya_urn:
        if (!(param("a0") >= 1.0) || !(param("b0") >= 1.0)) {
            throw ValidationError("polya_urn needs a0 >= 1 and b0 >= 1");
        }
        if (n < 1) throw ValidationError("polya_urn needs a number of draws n >= 1");
        break;
    }
}

std::map<std::string, std::string> GeneratorSpec::to_key_values() const {
    std::map<std::string, std::string> kv;
    kv["kind"] = std::string(to_string(kind));
    kv["n"] = std::to_string(n);
    kv["horizon"] = format_double(horizon);
    for (const auto& [k, v] : params) kv[k] = format_double(v);
    return kv;
}

GeneratorSpec GeneratorSpec::from_key_values(const std::map<std::string, std::string>& kv) {
    static const std::vector<std::string> known = {"lambda", "mu",      "theta", "beta",   "scale",
                                                   "rate",   "b",       "s",     "lambda0", "alpha",
                                                   "lambda_a", "rate_b", "beta_b", "a0",   "b0", "jitter"};
    GeneratorSpec spec;
    const auto kind = kv.find("kind");
    if (kind == kv.end()) {
        throw ValidationError("generator spec needs a 'kind'");
    }
    spec.kind = generator_kind_from_string(kind->second);
    auto number = [](const std::string& key, const std::string& text) {
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("parameter '" + key + "' is not a number: " + text);
        }
    };
    if (auto it = kv.find("n"); it != kv.end()) spec.n = static_cast<std::size_t>(number("n", it->second));
    if (auto it = kv.find("horizon"); it != kv.end()) spec.horizon = number("horizon", it->second);
    for (const auto& key : known) {
        if (auto it = kv.find(key); it != kv.end()) spec.params[key] = number(key, it->second);
    }
    return spec;
}

InterArrivalSequence generate_intervals(const GeneratorSpec& spec, const RngHandle& rng) {
    if (is_interval_kind(spec.kind) && spec.n >= 1) {
        spec.validate();
        return draw_intervals(spec, spec.n, rng);
    }
    const EventSequence events = generate_events(spec, rng);
    if (events.size() < 2) return {};
    return to_interarrivals(events);
}

EventSequence generate_events(const GeneratorSpec& spec, const RngHandle& rng) {
    spec.validate();
    if (is_interval_kind(spec.kind)) {
        if (spec.n >= 1) {
            return from_interarrivals(draw_intervals(spec, spec.n, rng), 0.0, true);
        }
        return intervals_until(spec, spec.horizon, true, rng);
    }
    switch (spec.kind) {
    case GeneratorKind::hawkes:
        return gen_hawkes(spec.param("lambda0"), spec.param("alpha"), spec.param("beta"), spec.horizon, rng).events;
    case GeneratorKind::superposition: {
        GeneratorSpec a;
        a.kind = GeneratorKind::poisson;
        a.params = {{"lambda", spec.param("lambda_a")}};
        GeneratorSpec b;
        b.kind = GeneratorKind::exp_ar1;
        b.params = {{"beta", spec.param_or("beta_b", 0.674)}, {"rate", spec.param("rate_b")}};
        return gen_superposition(intervals_until(a, spec.horizon, false, rng.child(0)),
                                 intervals_until(b, spec.horizon, false, rng.child(1)),
                                 spec.param_or("jitter", 0.0), rng.child(2));
    }
    case GeneratorKind::polya_urn:
        return gen_polya_urn(static_cast<std::size_t>(spec.param("a0")), static_cast<std::size_t>(spec.param("b0")),
                             spec.n, rng)
            .events;
    default:
        throw ValidationError("unsupported generator kind");
    }
}

SourceMoments analytic_moments(const GeneratorSpec& spec) {
    spec.validate();
    SourceMoments m;
    double rate = 0.0;
    switch (spec.kind) {
    case GeneratorKind::poisson:
        m.mean_tau = 1.0 / spec.param("lambda");
        break;
    case GeneratorKind::pareto_renewal:
        if (spec.param("mu") > 2.0) m.mean_tau = spec.param("theta") / (spec.param("mu") - 2.0);
        break;
    case GeneratorKind::abs_ar1: {
        const double beta = spec.param("beta");
        m.mean_tau = std::sqrt(2.0 / (std::numbers::pi * (1.0 - beta * beta)));
        break;
    }
    case GeneratorKind::exp_ar1:
        m.mean_tau = IntervalSource::exp_ar1_scale(spec) * exp_ar1_mean(spec.param("beta"));
        break;
    case GeneratorKind::stoch_vol: {
        const double b = spec.param("b");
        const double v = spec.param("s") * spec.param("s") / (1.0 - b * b);
        if (v < 1.0) m.mean_tau = 1.0 / std::sqrt(1.0 - v);
        break;
    }
    case GeneratorKind::hawkes: {
        const double alpha = spec.param("alpha");
        const double beta = spec.param("beta");
        if (alpha < beta) rate = beta / (beta - alpha) * spec.param("lambda0");
        break;
    }
    case GeneratorKind::superposition:
        rate = spec.param("lambda_a") + spec.param("rate_b");
        break;
    case GeneratorKind::polya_urn:
        break;
    }
    if (rate > 0.0) {
        m.mean_tau = 1.0 / rate;
        m.event_count = rate * spec.horizon;
    } else if (is_interval_kind(spec.kind)) {
        if (spec.n >= 1) {
            m.event_count = static_cast<double>(spec.n);
        } else if (m.mean_tau) {
            m.event_count = spec.horizon / *m.mean_tau;
        }
    }
    return m;
}

}  // namespace xa
