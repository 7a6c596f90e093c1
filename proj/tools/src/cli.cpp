#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>

#include "nullest/adaptation.hpp"
#include "nullest/location.hpp"
#include "nullest/lowerbound.hpp"
#include "nullest/parallel.hpp"
#include "nullest/rates.hpp"
#include "nullest/sim.hpp"

namespace nullest::cli {

namespace {

using nlohmann::ordered_json;

// Usage errors detected after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Estimator failures on valid input, mapped to exit 4.
struct EstimatorFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + path + "'");
    f << text;
}

Hyperparams apply_overrides(const std::vector<std::string>& overrides) {
    Hyperparams hp;
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + kv + "'");
        hp.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    hp.validate();
    return hp;
}

std::string hyperparam_footer() {
    const Hyperparams hp;
    std::ostringstream s;
    s << "Hyperparameters (override with --set key=value):\n";
    for (const auto& key : hp.keys()) s << "  " << key << " = " << hp.get(key) << "\n";
    s << "Exit codes: 0 ok, 2 usage/parse error, 3 k >= n/2, 4 estimator failure, 5 verification failed.\n"
         "NULL_EST_THREADS caps the number of worker threads.";
    return s.str();
}

struct EstimateArgs {
    std::string input;
    std::string output;
    std::optional<std::size_t> k;
    bool adaptive = false;
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;
};

struct SimulateArgs {
    std::size_t n = 1000;
    std::size_t k = 0;
    double theta = 0.0;
    double sigma2 = 1.0;
    std::string contamination = "constant_shift";
    std::optional<double> param;
    std::string noise = "gaussian";
    std::uint64_t seed = 0;
    std::string output;
};

struct SweepArgs {
    std::string input;
    std::string output;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
};

struct VerifyArgs {
    std::vector<double> eps;
    std::size_t n = 10000;
    std::string output;
    std::vector<std::string> overrides;
};

struct RatesArgs {
    std::size_t n = 0;
    std::vector<std::size_t> k;
    double sigma2 = 1.0;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
    if (a.k.has_value() == a.adaptive) throw UsageError("estimate needs exactly one of --k and --adaptive");
    const Hyperparams hp = apply_overrides(a.overrides);
    std::vector<double> values;
    if (a.input == "-") {
        values = parse_values(std::cin);
    } else {
        std::ifstream in(a.input, std::ios::binary);
        if (!in) throw InvalidArgument("cannot open '" + a.input + "'");
        values = parse_values(in);
    }
    if (values.empty()) throw InvalidArgument("input contains no values");
    const Sample sample(std::move(values));
    const std::size_t n = sample.size();

    ordered_json j;
    try {
        if (a.k) {
            require_identifiable(*a.k, n);
            const LocationEstimate loc = estimate_location_unknown_var(sample, *a.k, hp, a.seed);
            j["theta_hat"] = loc.theta_hat;
            j["sigma2_hat"] = loc.sigma2_hat;
            j["k_used_or_adaptive"] = *a.k;
            j["tau"] = loc.tau_used;
            j["pilot_sigma2"] = loc.pilot_sigma2;
            j["tv_rate_bound"] = number(rate_tv(std::max<std::size_t>(*a.k, 1), n));
        } else {
            require_identifiable(0, n);
            const AdaptiveNull ad = adaptive_null_estimate(sample, hp, a.seed);
            const std::size_t kp = std::max<std::size_t>(ad.location.k_prime, 1);
            j["theta_hat"] = ad.estimate.theta;
            j["sigma2_hat"] = ad.estimate.sigma2;
            j["k_used_or_adaptive"] = "adaptive";
            j["tau"] = number(2 * kp < n ? tau_unknown_var(kp, n, ad.estimate.sigma2, hp)
                                         : std::numeric_limits<double>::quiet_NaN());
            j["pilot_sigma2"] = ad.location.pilot_sigma2;
            j["tv_rate_bound"] = number(2 * kp < n ? rate_tv(kp, n) : std::numeric_limits<double>::quiet_NaN());
            j["k_prime_location"] = ad.location.k_prime;
            j["k_prime_variance"] = ad.variance.k_prime;
        }
    } catch (const NotIdentifiable&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw EstimatorFailure(e.what());
    } catch (const Error& e) {
        throw EstimatorFailure(e.what());
    }
    emit(j.dump(2) + "\n", a.output, out);
    return kOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    SweepSpec defaults;
    defaults.truth = NullParams{a.theta, a.sigma2};
    defaults.contamination = contamination_kind_from_string(a.contamination);
    defaults.contamination_param = a.param;
    if (defaults.contamination == ContaminationKind::custom)
        throw InvalidArgument("custom contamination is not available from the command line");
    ContaminationSpec cs{a.k, defaults.contamination, defaults.resolved_param(), {}};
    const auto gamma = realize_gamma(cs, a.n, hash_key({a.seed, 1}));
    const Sample x = generate_frequentist(defaults.truth, gamma, hash_key({a.seed, 2}), noise_kind_from_string(a.noise));
    std::ostringstream s;
    s << "# n=" << a.n << " k=" << a.k << " theta=" << format_double(a.theta)
      << " sigma2=" << format_double(a.sigma2) << " contamination=" << a.contamination << " noise=" << a.noise
      << " seed=" << a.seed << "\n";
    for (double v : x.values()) s << format_double(v) << "\n";
    emit(s.str(), a.output, out);
    return kOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");
    const Hyperparams hp = apply_overrides(a.overrides);
    SweepSpec spec = sweep_spec_from_json(a.input == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                                         : read_text(a.input));
    if (a.seed) spec.seed = *a.seed;
    const SweepResult result = run_sweep(spec, hp);
    emit(a.format == "csv" ? sweep_csv(result) : sweep_json(result), a.output, out);
    return kOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    Hyperparams hp;
    for (const auto& kv : a.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + kv + "'");
        hp.set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    if (a.eps.empty()) throw UsageError("verify-lowerbound needs --eps");

    ordered_json reports = ordered_json::array();
    std::vector<std::string> failures;
    for (double eps : a.eps) {
        const PriorConstruction pc = PriorConstruction::make(eps, a.n, hp.c0, hp.Bc);
        const DensityGrid grid = verification_grid(pc);
        const P1Report p1 = verify_p1(pc, grid);
        const MixtureReport mix = verify_mixture(pc, grid);

        std::vector<std::string> failed;
        if (!p1.c0_within_contract) failed.push_back("c0");
        if (!p1.min_ok) failed.push_back("min_p1");
        if (!p1.integral_ok) failed.push_back("integral_p1");
        if (!p1.delta_ok) failed.push_back("integral_delta");
        if (!mix.integrals_ok) failed.push_back("integral_f");
        if (!mix.cf_ok) failed.push_back("cf_match_max");
        if (!mix.chi2_ok) failed.push_back("chi2_estimate");

        ordered_json r;
        r["eps"] = eps;
        r["n"] = a.n;
        r["tau"] = pc.tau;
        r["mu"] = pc.mu;
        r["c0"] = pc.c0;
        r["Bc"] = pc.Bc;
        r["min_p1"] = number(p1.min_p1);
        r["integral_p1"] = number(p1.integral_p1);
        r["integral_delta"] = number(p1.integral_delta);
        r["integral_f0"] = number(mix.integral_f0);
        r["integral_f1"] = number(mix.integral_f1);
        r["cf_match_max"] = number(mix.cf_match_max);
        r["chi2_estimate"] = number(mix.chi2_estimate);
        r["passed"] = failed.empty();
        r["failed"] = failed;
        reports.push_back(std::move(r));
        for (const auto& f : failed) failures.push_back("eps=" + format_double(eps) + ": " + f);
    }
    emit(reports.dump(2) + "\n", a.output, out);
    if (failures.empty()) return kOk;
    for (const auto& f : failures) err << "verification failed: " << f << "\n";
    return kVerifyFailed;
}

int cmd_rates(const RatesArgs& a, std::ostream& out) {
    ordered_json rows = ordered_json::array();
    for (std::size_t k : a.k) {
        const RatePoint p = rate_point(k, a.n, a.sigma2);
        ordered_json r;
        r["n"] = p.n;
        r["k"] = p.k;
        r["location_rate_sq"] = p.location_rate_sq;
        r["variance_rate"] = p.variance_rate;
        r["tv_rate"] = p.tv_rate;
        r["eps_location"] = eps_location(k, a.n);
        r["eps_variance"] = eps_variance(k, a.n);
        r["huber_rate"] = huber_rate(k, a.n);
        rows.push_back(std::move(r));
    }
    out << rows.dump(2) << "\n";
    return kOk;
}

}  // namespace

std::vector<double> parse_values(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        double v = 0.0;
        try {
            v = parse_double(t);
        } catch (const InvalidArgument&) {
            throw InvalidArgument("line " + std::to_string(lineno) + ": not a decimal number: '" + t + "'");
        }
        if (!std::isfinite(v)) throw InvalidArgument("line " + std::to_string(lineno) + ": value is not finite");
        values.push_back(v);
    }
    return values;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Empirical null estimation under sparse mean-shift contamination", "nullest"};
    app.footer(hyperparam_footer());
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate N(theta, sigma2) from newline-delimited z-scores");
    estimate->add_option("--input,-i", est.input, "Input file ('-' for stdin)")->required();
    estimate->add_option("--output,-o", est.output, "Output file (default stdout)");
    auto* kopt = estimate->add_option("--k", est.k, "Known contamination count");
    auto* aopt = estimate->add_flag("--adaptive", est.adaptive, "Choose k by Lepski's method");
    kopt->excludes(aopt);
    estimate->add_option("--seed", est.seed, "Seed of the pilot subsets");
    estimate->add_option("--set", est.overrides, "Hyperparameter override key=value (repeatable)");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Draw a contaminated sample X = theta + gamma + sigma Z");
    simulate->add_option("--n", sim.n, "Sample size")->required();
    simulate->add_option("--k", sim.k, "Number of contaminated coordinates");
    simulate->add_option("--theta", sim.theta, "Null mean");
    simulate->add_option("--sigma2", sim.sigma2, "Null variance");
    simulate->add_option("--contamination", sim.contamination,
                         "zero, constant_shift, pi_over_omega, two_sided_blocks, prior_g0 or prior_g1");
    simulate->add_option("--param", sim.param, "Shift value, frequency or psi of the contamination");
    simulate->add_option("--noise", sim.noise, "gaussian or laplace");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--output,-o", sim.output, "Output file (default stdout)");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep described by a JSON spec");
    sweep->add_option("--input,-i", sw.input, "Sweep spec JSON file ('-' for stdin)")->required();
    sweep->add_option("--output,-o", sw.output, "Output file (default stdout)");
    sweep->add_option("--format", sw.format, "csv or json");
    sweep->add_option("--seed", sw.seed, "Override the spec's seed");
    sweep->add_option("--set", sw.overrides, "Hyperparameter override key=value (repeatable)");

    VerifyArgs ver;
    auto* verify = app.add_subcommand("verify-lowerbound", "Numerically verify the lower-bound prior pair");
    verify->add_option("--eps", ver.eps, "Contamination fractions in (0, 1/2]")->delimiter(',');
    verify->add_option("--n", ver.n, "Sample size");
    verify->add_option("--output,-o", ver.output, "Output file (default stdout)");
    verify->add_option("--set", ver.overrides, "Override c0 or Bc, key=value (repeatable)");

    RatesArgs rt;
    auto* rates = app.add_subcommand("rates", "Print the minimax rates for (k, n)");
    rates->add_option("--n", rt.n, "Sample size")->required();
    rates->add_option("--k", rt.k, "Contamination counts")->required()->delimiter(',');
    rates->add_option("--sigma2", rt.sigma2, "Null variance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kParse;
    }

    try {
        if (*estimate) return cmd_estimate(est, out);
        if (*simulate) return cmd_simulate(sim, out);
        if (*sweep) return cmd_sweep(sw, out);
        if (*verify) return cmd_verify(ver, out, err);
        if (*rates) return cmd_rates(rt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    } catch (const NotIdentifiable& e) {
        err << "error: " << e.what() << "\n";
        return kNotIdentifiable;
    } catch (const EstimatorFailure& e) {
        err << "error: estimator failed: " << e.what() << "\n";
        return kEstimatorFailure;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kEstimatorFailure;
    }
    return kParse;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"nullest"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nullest::cli
