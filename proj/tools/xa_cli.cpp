// Command-line front end: generate, xa, xa-single, power.
// Exit status: 0 renewal not rejected (or success), 1 renewal rejected, 2 error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xa/errors.hpp"
#include "xa/event_core.hpp"
#include "xa/format.hpp"
#include "xa/generators.hpp"
#include "xa/meta_analysis.hpp"
#include "xa/serialization.hpp"
#include "xa/single_realization.hpp"
#include "xa/svg.hpp"
#include "xa/xa_test.hpp"

namespace fs = std::filesystem;
using namespace xa;

namespace {

constexpr const char* kSeedEnv = "XA_SEED";
constexpr int kExitError = 2;

const std::vector<std::string> kGeneratorParams = {"lambda", "mu",      "theta",    "beta",   "scale",
                                                   "rate",   "b",       "s",        "lambda0", "alpha",
                                                   "lambda_a", "rate_b", "beta_b", "a0",     "b0",
                                                   "jitter"};

// Flag values with precedence: command line, then --config file, then defaults.
class Settings {
public:
    explicit Settings(CLI::App* app) : app_(app) {
        app_->add_option("--config", config_path_, "key = value file; keys mirror long flag names");
    }

    void option(const std::string& key, const std::string& help, const std::string& fallback = "") {
        defaults_[key] = fallback;
        app_->add_option("--" + key, values_[key], help);
    }

    void load() {
        if (config_path_.empty()) return;
        const KeyValues raw = read_key_values_file(config_path_);
        // A run manifest can serve as a config: its resolved keys carry a "config." prefix.
        const bool manifest = std::any_of(raw.begin(), raw.end(), [](const auto& kv) {
            return kv.first.rfind("config.", 0) == 0;
        });
        for (const auto& [k, v] : raw) {
            if (!manifest) {
                file_[k] = v;
            } else if (k.rfind("config.", 0) == 0) {
                file_[k.substr(7)] = v;
            }
        }
    }

    [[nodiscard]] bool on_command_line(const std::string& key) const {
        return app_->get_option("--" + key)->count() > 0;
    }

    [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
        if (on_command_line(key)) return values_.at(key);
        if (auto it = file_.find(key); it != file_.end()) return it->second;
        if (auto it = defaults_.find(key); it != defaults_.end() && !it->second.empty()) return it->second;
        return std::nullopt;
    }

    [[nodiscard]] std::string str(const std::string& key) const { return get(key).value_or(""); }

    [[nodiscard]] double num(const std::string& key) const { return parse_double(str(key), "--" + key); }

    [[nodiscard]] std::size_t count(const std::string& key) const {
        const double v = num(key);
        if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError("--" + key + " must be a non-negative integer");
        return static_cast<std::size_t>(v);
    }

    [[nodiscard]] std::uint64_t seed() const {
        if (on_command_line("seed")) return std::stoull(values_.at("seed"));
        if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
            if (file_.count("seed") == 0) return std::stoull(env);
        }
        return std::stoull(get("seed").value_or("0"));
    }

    [[nodiscard]] const KeyValues& file() const { return file_; }

    // Every resolved key, for the manifest echo.
    [[nodiscard]] KeyValues resolved() const {
        KeyValues out;
        for (const auto& [k, fallback] : defaults_) {
            if (auto v = get(k)) out[k] = *v;
        }
        return out;
    }

private:
    CLI::App* app_;
    std::string config_path_;
    std::map<std::string, std::string> values_;
    KeyValues defaults_;
    KeyValues file_;
};

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i > 0) s += ' ';
        s += argv[i];
    }
    return s;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

std::string to_text(const KeyValues& kv) {
    std::ostringstream out;
    write_key_values(out, kv);
    return out.str();
}

InputMode input_mode(const std::string& s) {
    if (s == "timestamps") return InputMode::timestamps;
    if (s == "interarrivals") return InputMode::interarrivals;
    throw ConfigError("--input-mode must be timestamps or interarrivals");
}

// Kinds whose mean waiting time is finite whenever analytic_moments does not know it.
bool finite_mean_kind(const GeneratorSpec& spec) {
    return spec.kind == GeneratorKind::polya_urn;
}

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
    return v[idx];
}

void write_outputs(const std::string& dir, const XAResult& result, const RunManifest& manifest, bool plot,
                   const std::string& title) {
    ensure_dir(dir);
    std::ostringstream results;
    write_results_csv(results, result);
    write_text_file(dir + "/results.csv", results.str());
    std::ostringstream ages;
    write_ages_csv(ages, result);
    write_text_file(dir + "/ages.csv", ages.str());
    write_text_file(dir + "/summary.txt", to_text(summary_of(result)));
    if (plot) write_text_file(dir + "/xa.svg", render_xa_svg(plot_spec_from(result, title)));
    write_text_file(dir + "/manifest.txt", to_text(manifest.to_key_values()));
}

void report(const XAResult& r, const std::string& dir) {
    std::size_t inside = 0;
    for (const auto& a : r.ages) inside += a.in_stripe ? 1 : 0;
    std::cout << "ages in stripe: " << inside << "/" << r.ages.size() << " (valid " << r.valid_ages << ")\n"
              << "z_g = " << format_double(r.z_g) << ", critical " << format_double(r.z_critical) << "\n"
              << "renewal " << (r.reject_renewal ? "REJECTED" : "not rejected") << "\n"
              << "results written to " << dir << "\n";
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

// ----------------------------------------------------------------------------
// generate

struct GenerateCmd {
    CLI::App* app;
    Settings settings;

    explicit GenerateCmd(CLI::App& root)
        : app(root.add_subcommand("generate", "Write a synthetic sequence")), settings(app) {
        settings.option("kind", "poisson|pareto_renewal|abs_ar1|exp_ar1|stoch_vol|hawkes|superposition|polya_urn");
        for (const auto& p : kGeneratorParams) {
            std::string flag = p;
            std::replace(flag.begin(), flag.end(), '_', '-');
            settings.option(flag, "generator parameter " + p);
        }
        settings.option("n", "number of waiting times (or urn draws)");
        settings.option("horizon", "time horizon");
        settings.option("seed", "random seed (default: $XA_SEED, else 0)");
        settings.option("out", "output file ('-' for stdout)", "-");
        settings.option("as", "auto|timestamps|interarrivals", "auto");
    }

    int run(int argc, char** argv) {
        settings.load();
        KeyValues kv;
        kv["kind"] = settings.str("kind");
        if (kv["kind"].empty()) throw ConfigError("--kind is required");
        for (const auto& p : kGeneratorParams) {
            std::string flag = p;
            std::replace(flag.begin(), flag.end(), '_', '-');
            if (auto v = settings.get(flag)) kv[p] = *v;
        }
        if (auto v = settings.get("n")) kv["n"] = *v;
        if (auto v = settings.get("horizon")) kv["horizon"] = *v;
        const GeneratorSpec spec = GeneratorSpec::from_key_values(kv);
        spec.validate();
        const std::uint64_t seed = settings.seed();
        std::string as = settings.str("as");
        if (as == "auto") {
            const bool intervals = spec.kind != GeneratorKind::hawkes && spec.kind != GeneratorKind::superposition &&
                                   spec.kind != GeneratorKind::polya_urn;
            as = intervals ? "interarrivals" : "timestamps";
        }
        std::ostringstream text;
        if (as == "interarrivals") {
            write_values(text, generate_intervals(spec, RngHandle(seed)).taus());
        } else if (as == "timestamps") {
            write_values(text, generate_events(spec, RngHandle(seed)).times());
        } else {
            throw ConfigError("--as must be auto, timestamps or interarrivals");
        }

        const std::string out = settings.str("out");
        if (out == "-") {
            std::cout << text.str();
            return 0;
        }
        write_text_file(out, text.str());
        RunManifest m;
        m.command = command_line(argc, argv);
        m.config = settings.resolved();
        m.config["as"] = as;
        m.config["seed"] = std::to_string(seed);
        for (const auto& [k, v] : spec.to_key_values()) m.config["spec." + k] = v;
        m.seed = seed;
        m.created = utc_timestamp();
        m.input_digests[out] = sha256_file(out);
        write_text_file(out + ".manifest.txt", to_text(m.to_key_values()));
        return 0;
    }
};

// ----------------------------------------------------------------------------
// xa

std::optional<GeneratorSpec> try_generator_spec(const std::string& arg) {
    KeyValues kv;
    if (fs::is_regular_file(arg)) {
        try {
            kv = read_key_values_file(arg);
        } catch (const ValidationError&) {
            return std::nullopt;  // a data file, not a key-value document
        }
    } else if (arg.find('=') != std::string::npos) {
        std::stringstream in(arg);
        std::string item;
        std::string lines;
        while (std::getline(in, item, ',')) lines += item + "\n";
        std::istringstream doc(lines);
        kv = read_key_values(doc);
    } else {
        throw IoError("spec '" + arg + "' is neither a file nor an inline key=value list");
    }
    if (kv.count("kind") == 0) return std::nullopt;
    return GeneratorSpec::from_key_values(kv);
}

struct XaCmd {
    CLI::App* app;
    Settings settings;
    std::vector<std::string> specs;

    explicit XaCmd(CLI::App& root)
        : app(root.add_subcommand("xa", "Repeated-realization XA test")), settings(app) {
        app->add_option("--spec", specs,
                        "generator spec (file or inline kind=...,n=...) or recorded realization files");
        settings.option("N", "trials per age", "100");
        settings.option("Ta", "number of ages", "20");
        settings.option("ta-max", "largest age (default L <tau> / 30)");
        settings.option("ta-min", "smallest age (default max(step, 10x 1st percentile))");
        settings.option("ta-max-rule", "duration (L <tau> / 30) or count (L / 30 time units)", "duration");
        settings.option("method", "ks|permutation|auto", "ks");
        settings.option("smax", "permutation budget", std::to_string(kDefaultPermutations));
        settings.option("alpha", "significance level", "0.05");
        settings.option("calibration", "stripe_calibrated|paper_literal", "stripe_calibrated");
        settings.option("seed", "random seed (default: $XA_SEED, else 0)");
        settings.option("workers", "worker threads (0 = all cores); never changes results", "0");
        settings.option("input-mode", "timestamps|interarrivals for recorded files", "interarrivals");
        settings.option("jitter", "uniform tie-breaking noise for recorded timestamps", "0");
        settings.option("allow-reuse", "true to pair with replacement when fewer than 2N files", "false");
        settings.option("out-dir", "output directory", "xa_out");
        settings.option("plot", "true to write xa.svg", "false");
    }

    int run(int argc, char** argv) {
        settings.load();
        const std::uint64_t seed = settings.seed();
        std::vector<std::string> sources = specs;
        std::optional<GeneratorSpec> generator;
        if (sources.empty()) {
            KeyValues spec_kv;
            for (const auto& [k, v] : settings.file()) {
                if (k.rfind("spec.", 0) == 0) spec_kv[k.substr(5)] = v;
            }
            if (!spec_kv.empty()) {
                generator = GeneratorSpec::from_key_values(spec_kv);
            } else if (auto it = settings.file().find("spec"); it != settings.file().end()) {
                std::stringstream in(it->second);
                std::string item;
                while (std::getline(in, item, ';')) sources.push_back(item);
            }
        }
        if (!generator && sources.size() == 1) generator = try_generator_spec(sources.front());
        if (!generator && sources.empty()) throw ConfigError("--spec is required");

        RunManifest manifest;
        std::vector<EventSequence> recorded;
        SourceSummary summary;
        std::vector<std::string> warnings;
        if (generator) {
            generator->validate();
            const auto moments = analytic_moments(*generator);
            const auto pilot = generate_intervals(*generator, RngHandle(seed).child({~0ULL}));
            if (pilot.size() < 2) throw ConfigError("pilot realization has fewer than two waiting times");
            summary.event_count = moments.event_count.value_or(static_cast<double>(pilot.size()));
            summary.mean_tau = moments.mean_tau.value_or(pilot.mean());
            summary.tau_p1 = percentile(pilot.values(), 0.01);
            if (!moments.mean_tau && !finite_mean_kind(*generator)) {
                summary.t_a_cap = max_valid_age(pilot);
                warnings.push_back("mean waiting time is not finite; t_a_max = " + format_double(*summary.t_a_cap) +
                                   " is the largest age leaving more than 30 aged samples in a pilot realization");
            }
        } else {
            const InputMode mode = input_mode(settings.str("input-mode"));
            const double jitter = settings.num("jitter");
            std::vector<double> pooled;
            for (std::size_t i = 0; i < sources.size(); ++i) {
                if (!fs::is_regular_file(sources[i])) throw IoError("cannot open '" + sources[i] + "'");
                auto loaded = load_sequence_file(sources[i], mode, jitter, RngHandle(seed).child({~0ULL, i}));
                for (auto& w : loaded.warnings) warnings.push_back(sources[i] + ": " + w);
                pooled.insert(pooled.end(), loaded.taus.values().begin(), loaded.taus.values().end());
                recorded.push_back(std::move(loaded.events));
                manifest.input_digests[sources[i]] = sha256_file(sources[i]);
            }
            if (pooled.empty()) throw ValidationError("recorded inputs contain no waiting times");
            summary.event_count = static_cast<double>(pooled.size()) / static_cast<double>(sources.size());
            summary.mean_tau = std::accumulate(pooled.begin(), pooled.end(), 0.0) / static_cast<double>(pooled.size());
            summary.tau_p1 = percentile(pooled, 0.01);
        }

        const std::string rule = settings.str("ta-max-rule");
        if (rule == "count") {
            summary.t_a_cap = summary.event_count / 30.0;
        } else if (rule != "duration") {
            throw ConfigError("--ta-max-rule must be duration or count");
        }

        XAConfig config;
        config.T_a = settings.count("Ta");
        const bool explicit_range = settings.get("ta-max").has_value() && settings.get("ta-min").has_value();
        if (!explicit_range) {
            XAConfig derived = default_config(summary, &warnings);
            config.t_a_max = derived.t_a_max;
            config.t_a_min = std::max(derived.t_a_max / static_cast<double>(config.T_a), 10.0 * summary.tau_p1);
        }
        if (auto v = settings.get("ta-max")) config.t_a_max = parse_double(*v, "--ta-max");
        if (auto v = settings.get("ta-min")) {
            config.t_a_min = parse_double(*v, "--ta-min");
        } else if (settings.get("ta-max")) {
            config.t_a_min = std::max(config.t_a_max / static_cast<double>(config.T_a), 10.0 * summary.tau_p1);
        }
        config.N = settings.count("N");
        config.method = method_from_string(settings.str("method"));
        config.s_max = settings.count("smax");
        config.alpha = settings.num("alpha");
        config.calibration = calibration_from_string(settings.str("calibration"));
        config.seed = seed;
        config.workers = settings.count("workers");
        config.validate();
        // Same warning whether the range was derived or given, so replays match.
        const double at_max = expected_aged_count(summary.event_count, summary.mean_tau, config.t_a_max);
        const bool warned = std::any_of(warnings.begin(), warnings.end(),
                                        [](const std::string& w) { return w.rfind("expected aged-sample size", 0) == 0; });
        if (at_max <= 30.0 && !warned) {
            warnings.push_back("expected aged-sample size at t_a_max is " + format_double(std::round(at_max * 10) / 10) +
                               ", below the KS validity threshold; the largest ages may be flagged invalid");
        }

        XAResult result;
        if (generator) {
            const GeneratorSpec spec = *generator;
            result = run_exact(pair_source_from([spec](const RngHandle& h) { return generate_intervals(spec, h); }),
                               config);
        } else {
            result = run_exact_on_samples(recorded, config, settings.str("allow-reuse") == "true");
        }
        result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());

        manifest.command = command_line(argc, argv);
        manifest.config = settings.resolved();
        manifest.config["seed"] = std::to_string(seed);
        manifest.config["ta-min"] = format_double(config.t_a_min);
        manifest.config["ta-max"] = format_double(config.t_a_max);
        if (generator) {
            for (const auto& [k, v] : generator->to_key_values()) manifest.config["spec." + k] = v;
        } else {
            std::string joined;
            for (const auto& s : sources) joined += (joined.empty() ? "" : ";") + s;
            manifest.config["spec"] = joined;
        }
        manifest.seed = seed;
        manifest.created = utc_timestamp();

        const std::string dir = settings.str("out-dir");
        const std::string title =
            generator ? "XA plot: " + std::string(to_string(generator->kind)) : "XA plot: recorded realizations";
        write_outputs(dir, result, manifest, settings.str("plot") == "true", title);
        report(result, dir);
        return result.reject_renewal ? 1 : 0;
    }
};

// ----------------------------------------------------------------------------
// xa-single

struct SingleCmd {
    CLI::App* app;
    Settings settings;

    explicit SingleCmd(CLI::App& root)
        : app(root.add_subcommand("xa-single", "Approximate XA test on one realization")), settings(app) {
        settings.option("input", "newline-delimited sequence file");
        settings.option("input-mode", "timestamps|interarrivals", "interarrivals");
        settings.option("jitter", "uniform tie-breaking noise for timestamps", "0");
        settings.option("tw", "waiting times per window", "500");
        settings.option("Ta", "number of ages", "20");
        settings.option("smax", "permutation budget", std::to_string(kDefaultPermutations));
        settings.option("method", "auto|ks|permutation", "auto");
        settings.option("adjust", "none|bonferroni", "none");
        settings.option("alpha", "significance level", "0.05");
        settings.option("seed", "random seed (default: $XA_SEED, else 0)");
        settings.option("workers", "worker threads (0 = all cores); never changes results", "0");
        settings.option("out-dir", "output directory", "xa_single_out");
        settings.option("plot", "true to write xa.svg", "false");
    }

    int run(int argc, char** argv) {
        settings.load();
        const std::uint64_t seed = settings.seed();
        const std::string input = settings.str("input");
        if (input.empty()) throw ConfigError("--input is required");
        if (!fs::is_regular_file(input)) throw IoError("cannot open '" + input + "'");
        auto loaded = load_sequence_file(input, input_mode(settings.str("input-mode")), settings.num("jitter"),
                                         RngHandle(seed).child({~0ULL}));

        SingleConfig c;
        c.t_w = settings.count("tw");
        c.T_a = settings.count("Ta");
        c.s_max = settings.count("smax");
        c.method = method_from_string(settings.str("method"));
        c.adjust = adjust_from_string(settings.str("adjust"));
        c.alpha = settings.num("alpha");
        c.seed = seed;
        c.workers = settings.count("workers");
        XAResult result = run_single(loaded.taus, c);
        result.warnings.insert(result.warnings.begin(), loaded.warnings.begin(), loaded.warnings.end());

        RunManifest manifest;
        manifest.command = command_line(argc, argv);
        manifest.config = settings.resolved();
        manifest.config["seed"] = std::to_string(seed);
        manifest.seed = seed;
        manifest.created = utc_timestamp();
        manifest.input_digests[input] = sha256_file(input);
        const std::string dir = settings.str("out-dir");
        write_outputs(dir, result, manifest, settings.str("plot") == "true", "Single-realization XA plot");
        report(result, dir);
        return result.reject_renewal ? 1 : 0;
    }
};

// ----------------------------------------------------------------------------
// power

std::vector<std::size_t> parse_counts(const std::string& list, const std::string& what) {
    std::vector<std::size_t> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        const double v = parse_double(item, what);
        if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(what + " values must be positive integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw ConfigError(what + " is empty");
    return out;
}

struct PowerCmd {
    CLI::App* app;
    Settings settings;

    explicit PowerCmd(CLI::App& root)
        : app(root.add_subcommand("power", "Analytic power of the lower-tailed z test")), settings(app) {
        settings.option("mu1", "expected geometric mean under the alternative", "0.30");
        settings.option("N", "trials per age", "100");
        settings.option("Ta", "number of ages", "100");
        settings.option("alpha", "significance level", "0.05");
        settings.option("calibration", "stripe_calibrated|paper_literal", "stripe_calibrated");
        settings.option("sweep", "none|N|Ta", "none");
        settings.option("values", "comma-separated sweep grid", "10,20,50,100,200,500");
        settings.option("plot", "SVG path for the power curve");
    }

    int run(int, char**) {
        settings.load();
        const double mu1 = settings.num("mu1");
        const double alpha = settings.num("alpha");
        const Calibration cal = calibration_from_string(settings.str("calibration"));
        const std::string sweep = settings.str("sweep");
        std::vector<std::size_t> Ns = {settings.count("N")};
        std::vector<std::size_t> Tas = {settings.count("Ta")};
        if (sweep == "N") {
            Ns = parse_counts(settings.str("values"), "--values");
        } else if (sweep == "Ta") {
            Tas = parse_counts(settings.str("values"), "--values");
        } else if (sweep != "none") {
            throw ConfigError("--sweep must be none, N or Ta");
        }
        CurveSeries curve;
        curve.label = "mu1 = " + format_double(mu1);
        std::cout << "N,T_a,mu1,mu0,power\n";
        for (std::size_t N : Ns) {
            for (std::size_t T : Tas) {
                const double p = power_lower_tailed(mu1, N, T, alpha, cal);
                const double mu0 = cal == Calibration::paper_literal ? std::exp(-1.0) : GeoNull::for_trials(N).mu0;
                std::cout << N << ',' << T << ',' << format_double(mu1) << ',' << format_double(mu0) << ','
                          << format_double(p) << '\n';
                curve.x.push_back(static_cast<double>(sweep == "Ta" ? T : N));
                curve.y.push_back(p);
            }
        }
        if (auto path = settings.get("plot")) {
            if (sweep == "none") throw ConfigError("--plot needs --sweep N or --sweep Ta");
            const std::string fixed = sweep == "N" ? "T_a = " + std::to_string(Tas[0]) : "N = " + std::to_string(Ns[0]);
            write_text_file(*path, render_curve_svg({curve}, sweep == "N" ? "N" : "T_a", "power",
                                                    "Power of the lower-tailed z test (" + fixed + ", alpha = " +
                                                        format_double(alpha) + ")"));
        }
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Renewal/memory detection by aging experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    GenerateCmd generate(app);
    XaCmd xa(app);
    SingleCmd single(app);
    PowerCmd power(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }
    try {
        if (generate.app->parsed()) return generate.run(argc, argv);
        if (xa.app->parsed()) return xa.run(argc, argv);
        if (single.app->parsed()) return single.run(argc, argv);
        if (power.app->parsed()) return power.run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
