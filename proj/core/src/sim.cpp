#include "nullest/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nullest/adaptation.hpp"
#include "nullest/baselines.hpp"
#include "nullest/location.hpp"
#include "nullest/lowerbound.hpp"
#include "nullest/mode.hpp"
#include "nullest/parallel.hpp"
#include "nullest/rates.hpp"
#include "nullest/rng.hpp"
#include "nullest/variance.hpp"

namespace nullest {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kGammaStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kEstimatorStream = 3;

double laplace_draw(Stream& rng) {
    const double u = rng.uniform_open() - 0.5;
    return u < 0.0 ? std::log1p(2.0 * u) : -std::log1p(-2.0 * u);
}

std::size_t count_nonzero(std::span<const double> gamma) {
    return static_cast<std::size_t>(std::count_if(gamma.begin(), gamma.end(), [](double g) { return g != 0.0; }));
}

EstimatorOutput location_only(double theta) { return {theta, std::nullopt}; }
EstimatorOutput variance_only(double sigma2) { return {std::nullopt, sigma2}; }

std::vector<EstimatorInfo> make_registry() {
    using S = const Sample&;
    using C = const EstimatorContext&;
    std::vector<EstimatorInfo> r;
    r.push_back({"zero", Target::location, [](S, C) { return location_only(0.0); }});
    r.push_back({"median", Target::location, [](S x, C) { return location_only(sample_median(x)); }});
    r.push_back({"kernel_mode", Target::location, [](S x, C c) {
                     const double h = mode_bandwidth(c.k, x.size(), *c.hp) * c.truth.sigma();
                     return location_only(kernel_mode(x, h).theta_hat);
                 }});
    r.push_back({"fourier_known_var", Target::location, [](S x, C c) {
                     return location_only(estimate_location_known_var(x, c.k, c.truth.sigma2, *c.hp).theta_hat);
                 }});
    r.push_back({"fourier_unknown_var", Target::location, [](S x, C c) {
                     return location_only(estimate_location_unknown_var(x, c.k, *c.hp, c.seed).theta_hat);
                 }});
    r.push_back({"fourier_deconv", Target::location, [](S x, C c) {
                     if (c.noise == NoiseKind::laplace) {
                         const double tau = laplace_tau(c.k, x.size(), c.hp->laplace_tau_const);
                         return location_only(estimate_location_general(x, c.k, NoiseModel::laplace(), tau, *c.hp).theta_hat);
                     }
                     const double tau = tau_known_var(c.k, x.size(), *c.hp);
                     return location_only(estimate_location_general(x, c.k, NoiseModel::gaussian(), tau, *c.hp).theta_hat);
                 }});
    r.push_back({"lepski_location", Target::location,
                 [](S x, C c) { return location_only(lepski_location(x, *c.hp, c.seed).estimate); }});
    r.push_back({"caijin_location", Target::location, [](S x, C c) {
                     return location_only(caijin_location(x, {c.hp->caijin_omega, c.hp->caijin_fd_step}));
                 }});
    r.push_back({"variance", Target::variance,
                 [](S x, C c) { return variance_only(estimate_variance(x, c.k, *c.hp, c.seed).sigma2_hat); }});
    r.push_back({"single_frequency_variance", Target::variance,
                 [](S x, C c) { return variance_only(single_frequency_variance(x, c.single_frequency_omega)); }});
    r.push_back({"pilot_variance", Target::variance, [](S x, C c) {
                     return variance_only(pilot_variance(x, PilotConfig::defaults(x.size(), *c.hp, c.seed)));
                 }});
    r.push_back({"lepski_variance", Target::variance,
                 [](S x, C c) { return variance_only(lepski_variance(x, *c.hp, c.seed).estimate); }});
    r.push_back({"caijin_variance", Target::variance, [](S x, C c) {
                     return variance_only(caijin_variance(x, {c.hp->caijin_omega, c.hp->caijin_fd_step}));
                 }});
    r.push_back({"adaptive_null", Target::tv, [](S x, C c) {
                     const AdaptiveNull a = adaptive_null_estimate(x, *c.hp, c.seed);
                     return EstimatorOutput{a.estimate.theta, a.estimate.sigma2};
                 }});
    return r;
}

std::string format_cell(double v) {
    if (std::isnan(v)) return "nan";
    return format_double(v);
}

struct Config {
    std::size_t n;
    std::size_t k;
};

}  // namespace

std::string to_string(NoiseKind kind) { return kind == NoiseKind::gaussian ? "gaussian" : "laplace"; }

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "laplace") return NoiseKind::laplace;
    throw InvalidArgument("unknown noise kind '" + name + "'");
}

std::vector<double> realize_gamma(const ContaminationSpec& spec, std::size_t n, std::uint64_t seed) {
    if (spec.k > n) throw InvalidArgument("contamination count k exceeds n");
    std::vector<double> gamma(n, 0.0);
    const std::size_t k = spec.k;
    switch (spec.kind) {
        case ContaminationKind::zero: break;
        case ContaminationKind::constant_shift: std::fill_n(gamma.begin(), k, spec.param); break;
        case ContaminationKind::pi_over_omega:
            if (spec.param == 0.0) throw InvalidArgument("pi_over_omega needs a nonzero frequency");
            std::fill_n(gamma.begin(), k, std::numbers::pi / spec.param);
            break;
        case ContaminationKind::two_sided_blocks:
            for (std::size_t j = 0; j < k; ++j) gamma[j] = j < (k + 1) / 2 ? spec.param : -spec.param;
            break;
        case ContaminationKind::prior_g0:
        case ContaminationKind::prior_g1: {
            if (k == 0) break;
            const double eps = spec.param > 0.0 ? spec.param : static_cast<double>(k) / static_cast<double>(n);
            const PriorConstruction pc = PriorConstruction::make(std::min(eps, 0.5), n, 1.0 / 24.0, 3.0);
            const int arm = spec.kind == ContaminationKind::prior_g0 ? 0 : 1;
            Stream rng = Stream::keyed({seed, 0x7072ULL});
            for (std::size_t j = 0; j < k; ++j) gamma[j] = sample_prior_shift(rng, pc, arm);
            break;
        }
        case ContaminationKind::custom:
            if (spec.custom.size() != n) throw InvalidArgument("custom gamma must have length n");
            if (count_nonzero(spec.custom) > k) throw InvalidArgument("custom gamma has more than k nonzeros");
            gamma = spec.custom;
            break;
    }
    return gamma;
}

Sample generate_frequentist(const NullParams& params, std::span<const double> gamma, std::uint64_t seed,
                            NoiseKind noise) {
    params.validate();
    Stream rng(seed);
    const double sigma = params.sigma();
    std::vector<double> x(gamma.size());
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        const double z = noise == NoiseKind::gaussian ? rng.normal() : laplace_draw(rng);
        x[j] = params.theta + gamma[j] + sigma * z;
    }
    return Sample(std::move(x));
}

Sample generate_frequentist(const NullParams& params, const ContaminationSpec& spec, std::size_t n, std::uint64_t seed) {
    const auto gamma = realize_gamma(spec, n, hash_key({seed, kGammaStream}));
    return generate_frequentist(params, gamma, hash_key({seed, kNoiseStream}));
}

Sample generate_bayes(double eps, const NullParams& params, const QSpec& q, std::size_t n, std::uint64_t seed) {
    if (!(eps >= 0.0 && eps <= 0.5)) throw InvalidArgument("eps must lie in [0, 1/2]");
    if (n < 1) throw InvalidArgument("n must be positive");
    params.validate();
    std::optional<PriorConstruction> pc;
    if ((q.kind == QSpec::Kind::prior_g0 || q.kind == QSpec::Kind::prior_g1) && eps > 0.0)
        pc = PriorConstruction::make(eps, n, q.c0, q.Bc);
    if (q.kind == QSpec::Kind::uniform && !(q.a <= q.b)) throw InvalidArgument("uniform Q needs a <= b");

    Stream rng = Stream::keyed({seed, 0x62617965ULL});
    const double sigma = params.sigma();
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        double shift = 0.0;
        if (rng.uniform() < eps) {
            switch (q.kind) {
                case QSpec::Kind::point_mass: shift = q.a; break;
                case QSpec::Kind::uniform: shift = q.a + (q.b - q.a) * rng.uniform(); break;
                case QSpec::Kind::prior_g0: shift = sigma * sample_prior_shift(rng, *pc, 0); break;
                case QSpec::Kind::prior_g1: shift = sigma * sample_prior_shift(rng, *pc, 1); break;
            }
        }
        x[j] = params.theta + shift + sigma * rng.normal();
    }
    return Sample(std::move(x));
}

const std::vector<EstimatorInfo>& estimator_registry() {
    static const std::vector<EstimatorInfo> registry = make_registry();
    return registry;
}

const EstimatorInfo& find_estimator(const std::string& id) {
    for (const auto& e : estimator_registry())
        if (e.id == id) return e;
    throw InvalidArgument("unknown estimator id '" + id + "'");
}

std::size_t KRule::resolve(std::size_t n) const {
    const double nd = static_cast<double>(n);
    double k = 0.0;
    switch (kind) {
        case Kind::sqrt_n: k = std::floor(std::sqrt(nd)); break;
        case Kind::frac: k = std::floor(value * nd); break;
        case Kind::near_half: k = std::floor((nd - std::round(value * std::sqrt(nd))) / 2.0); break;
        case Kind::fixed: k = value; break;
    }
    if (!(k >= 0.0) || k != std::floor(k)) throw InvalidArgument("k rule resolves to an invalid k");
    return static_cast<std::size_t>(k);
}

void SweepSpec::validate() const {
    if (n_list.empty()) throw InvalidArgument("sweep needs at least one n");
    if (k_rules.empty()) throw InvalidArgument("sweep needs at least one k rule");
    if (trials < 1) throw InvalidArgument("sweep needs trials >= 1");
    if (estimators.empty()) throw InvalidArgument("sweep needs at least one estimator");
    for (const auto& id : estimators) find_estimator(id);
    truth.validate();
    for (std::size_t n : n_list)
        if (n < 2) throw InvalidArgument("sweep n must be at least 2");
}

double SweepSpec::resolved_param() const {
    if (contamination_param) return *contamination_param;
    switch (contamination) {
        case ContaminationKind::constant_shift: return 10.0 * truth.sigma();
        case ContaminationKind::pi_over_omega: return single_frequency_omega;
        case ContaminationKind::two_sided_blocks: return 10.0 * truth.sigma();
        default: return 0.0;
    }
}

double theory_rate(Target target, std::size_t k, std::size_t n, double sigma2) {
    if (2 * k >= n) return kNaN;
    const std::size_t kk = std::max<std::size_t>(k, 1);
    switch (target) {
        case Target::location: return std::sqrt(rate_location_sq(kk, n, sigma2));
        case Target::variance: return std::sqrt(rate_variance(kk, n));
        case Target::tv: return rate_tv(kk, n);
    }
    return kNaN;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return kNaN;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

SweepResult run_sweep(const SweepSpec& spec, const Hyperparams& hp) {
    spec.validate();
    hp.validate();
    std::vector<Config> configs;
    for (std::size_t n : spec.n_list)
        for (const KRule& rule : spec.k_rules) configs.push_back({n, rule.resolve(n)});

    std::vector<const EstimatorInfo*> estimators;
    for (const auto& id : spec.estimators) estimators.push_back(&find_estimator(id));
    const std::size_t per_trial = estimators.size();
    const std::size_t tasks = configs.size() * spec.trials;

    SweepResult result;
    result.trials.resize(tasks * per_trial);
    const double param = spec.resolved_param();
    parallel_for(tasks, [&](std::size_t task) {
        const Config& cfg = configs[task / spec.trials];
        const std::size_t t = task % spec.trials;
        const std::uint64_t key = hash_key({spec.seed, cfg.n, cfg.k, t});
        ContaminationSpec cs{cfg.k, spec.contamination, param, {}};
        const auto gamma = realize_gamma(cs, cfg.n, hash_key({key, kGammaStream}));
        if (count_nonzero(gamma) > cfg.k) throw std::logic_error("contamination count exceeds k");
        const Sample sample = generate_frequentist(spec.truth, gamma, hash_key({key, kNoiseStream}), spec.noise);

        EstimatorContext ctx;
        ctx.k = cfg.k;
        ctx.hp = &hp;
        ctx.seed = hash_key({key, kEstimatorStream});
        ctx.truth = spec.truth;
        ctx.noise = spec.noise;
        ctx.single_frequency_omega = spec.single_frequency_omega;

        for (std::size_t e = 0; e < per_trial; ++e) {
            TrialResult& tr = result.trials[task * per_trial + e];
            tr.estimator_id = estimators[e]->id;
            tr.n = cfg.n;
            tr.k = cfg.k;
            tr.trial = t;
            tr.seed = key;
            tr.theta_err = kNaN;
            const auto start = std::chrono::steady_clock::now();
            try {
                const EstimatorOutput out = estimators[e]->run(sample, ctx);
                if (out.theta) tr.theta_err = std::abs(*out.theta - spec.truth.theta);
                if (out.sigma2) tr.var_rel_err = std::abs(*out.sigma2 - spec.truth.sigma2) / spec.truth.sigma2;
                if (out.theta && out.sigma2)
                    tr.tv_err = tv_gaussian_surrogate(NullParams{*out.theta, *out.sigma2}, spec.truth);
            } catch (const std::exception& ex) {
                tr.error = ex.what();
                if (tr.error.empty()) tr.error = "estimator failed";
            }
            tr.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    });

    for (std::size_t e = 0; e < per_trial; ++e) {
        for (std::size_t c = 0; c < configs.size(); ++c) {
            std::vector<double> errs;
            for (std::size_t t = 0; t < spec.trials; ++t) {
                const TrialResult& tr = result.trials[(c * spec.trials + t) * per_trial + e];
                if (!tr.ok()) continue;
                double v = kNaN;
                switch (estimators[e]->target) {
                    case Target::location: v = tr.theta_err; break;
                    case Target::variance: v = tr.var_rel_err.value_or(kNaN); break;
                    case Target::tv: v = tr.tv_err.value_or(kNaN); break;
                }
                if (!std::isnan(v)) errs.push_back(v);
            }
            AggregateRow row;
            row.estimator = estimators[e]->id;
            row.n = configs[c].n;
            row.k = configs[c].k;
            row.trials = errs.size();
            row.median_err = quantile(errs, 0.5);
            row.q10 = quantile(errs, 0.1);
            row.q90 = quantile(errs, 0.9);
            row.theory_rate = theory_rate(estimators[e]->target, row.k, row.n, spec.truth.sigma2);
            row.ratio = row.median_err / row.theory_rate;
            result.rows.push_back(row);
        }
    }
    return result;
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "estimator,n,k,trials,median_err,q10,q90,theory_rate,ratio\n";
    for (const auto& r : result.rows) {
        out << r.estimator << ',' << r.n << ',' << r.k << ',' << r.trials << ',' << format_cell(r.median_err) << ','
            << format_cell(r.q10) << ',' << format_cell(r.q90) << ',' << format_cell(r.theory_rate) << ','
            << format_cell(r.ratio) << '\n';
    }
    return out.str();
}

std::string sweep_json(const SweepResult& result) {
    using nlohmann::ordered_json;
    auto number = [](double v) { return std::isnan(v) ? ordered_json(nullptr) : ordered_json(v); };
    ordered_json rows = ordered_json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"estimator", r.estimator},
                        {"n", r.n},
                        {"k", r.k},
                        {"trials", r.trials},
                        {"median_err", number(r.median_err)},
                        {"q10", number(r.q10)},
                        {"q90", number(r.q90)},
                        {"theory_rate", number(r.theory_rate)},
                        {"ratio", number(r.ratio)}});
    }
    ordered_json trials = ordered_json::array();
    for (const auto& t : result.trials) {
        ordered_json j{{"estimator_id", t.estimator_id}, {"n", t.n}, {"k", t.k}, {"trial", t.trial},
                       {"theta_err", number(t.theta_err)}};
        j["var_rel_err"] = t.var_rel_err ? number(*t.var_rel_err) : ordered_json(nullptr);
        j["tv_err"] = t.tv_err ? number(*t.tv_err) : ordered_json(nullptr);
        j["seed"] = t.seed;
        j["wall_time"] = t.wall_time;
        if (!t.ok()) j["error"] = t.error;
        trials.push_back(std::move(j));
    }
    return ordered_json{{"rows", rows}, {"trials", trials}}.dump(2) + "\n";
}

namespace {

KRule parse_k_rule(const nlohmann::json& j) {
    if (j.is_number_integer()) return {KRule::Kind::fixed, static_cast<double>(j.get<std::int64_t>())};
    if (!j.is_object()) throw InvalidArgument("k rule must be an integer or an object");
    const std::string kind = j.at("kind").get<std::string>();
    static const std::map<std::string, KRule::Kind> kinds = {{"sqrt_n", KRule::Kind::sqrt_n},
                                                             {"frac", KRule::Kind::frac},
                                                             {"near_half", KRule::Kind::near_half},
                                                             {"fixed", KRule::Kind::fixed}};
    const auto it = kinds.find(kind);
    if (it == kinds.end()) throw InvalidArgument("unknown k rule '" + kind + "'");
    KRule rule{it->second, 0.0};
    if (rule.kind != KRule::Kind::sqrt_n) rule.value = j.at("value").get<double>();
    return rule;
}

}  // namespace

SweepSpec sweep_spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("sweep spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("sweep spec must be a JSON object");
    static const std::vector<std::string> known = {"n", "k", "k_rule", "k_rules", "contamination", "theta", "sigma2",
                                                   "noise", "trials", "estimators", "seed", "single_frequency_omega"};
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw InvalidArgument("unknown sweep spec field '" + key + "'");

    SweepSpec spec;
    try {
        const auto& n = j.at("n");
        if (n.is_array()) {
            for (const auto& v : n) spec.n_list.push_back(v.get<std::size_t>());
        } else {
            spec.n_list.push_back(n.get<std::size_t>());
        }
        if (j.contains("k")) {
            const auto& k = j["k"];
            if (k.is_array()) {
                for (const auto& v : k) spec.k_rules.push_back(parse_k_rule(v));
            } else {
                spec.k_rules.push_back(parse_k_rule(k));
            }
        }
        if (j.contains("k_rule")) spec.k_rules.push_back(parse_k_rule(j["k_rule"]));
        if (j.contains("k_rules"))
            for (const auto& v : j["k_rules"]) spec.k_rules.push_back(parse_k_rule(v));
        if (j.contains("contamination")) {
            const auto& c = j["contamination"];
            spec.contamination = contamination_kind_from_string(c.at("kind").get<std::string>());
            if (c.contains("value")) spec.contamination_param = c["value"].get<double>();
        }
        spec.truth.theta = j.value("theta", 0.0);
        spec.truth.sigma2 = j.value("sigma2", 1.0);
        spec.noise = noise_kind_from_string(j.value("noise", std::string("gaussian")));
        spec.trials = j.at("trials").get<std::size_t>();
        for (const auto& e : j.at("estimators")) spec.estimators.push_back(e.get<std::string>());
        spec.seed = j.value("seed", std::uint64_t{0});
        spec.single_frequency_omega = j.value("single_frequency_omega", 1.0);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed sweep spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

}  // namespace nullest
