#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nullest/types.hpp"

namespace nullest {

enum class NoiseKind { gaussian, laplace };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

// γ with at most spec.k nonzeros, placed on the first coordinates. Prior
// kinds draw from the lower-bound construction with ε = spec.param (or k/n
// when param is 0); `seed` only matters for them.
std::vector<double> realize_gamma(const ContaminationSpec& spec, std::size_t n, std::uint64_t seed);

// X_j = θ + γ_j + σ Z_j with Z_j standard normal, or unit-scale Laplace
// scaled by σ when noise is laplace.
Sample generate_frequentist(const NullParams& params, std::span<const double> gamma, std::uint64_t seed,
                            NoiseKind noise = NoiseKind::gaussian);
Sample generate_frequentist(const NullParams& params, const ContaminationSpec& spec, std::size_t n, std::uint64_t seed);

// Distribution Q of the shift γ in the Bayes model.
struct QSpec {
    enum class Kind { point_mass, uniform, prior_g0, prior_g1 };
    Kind kind = Kind::point_mass;
    double a = 0.0;  // point mass location, or uniform lower end
    double b = 0.0;  // uniform upper end
    double c0 = 1.0 / 24.0;
    double Bc = 3.0;
};

// (1−ε) N(θ, σ²) + ε (Q ∗ N(0, σ²)) per coordinate, with Q shifting θ. For
// the prior kinds the shift is drawn in units of σ from the construction
// built with this ε and n.
Sample generate_bayes(double eps, const NullParams& params, const QSpec& q, std::size_t n, std::uint64_t seed);

enum class Target { location, variance, tv };

struct EstimatorOutput {
    std::optional<double> theta;
    std::optional<double> sigma2;
};

struct EstimatorContext {
    std::size_t k = 0;
    const Hyperparams* hp = nullptr;
    std::uint64_t seed = 0;
    NullParams truth;
    NoiseKind noise = NoiseKind::gaussian;
    double single_frequency_omega = 1.0;
};

struct EstimatorInfo {
    std::string id;
    Target target;
    std::function<EstimatorOutput(const Sample&, const EstimatorContext&)> run;
};

const std::vector<EstimatorInfo>& estimator_registry();
// Throws InvalidArgument for unknown ids.
const EstimatorInfo& find_estimator(const std::string& id);

struct KRule {
    enum class Kind { sqrt_n, frac, near_half, fixed };
    Kind kind = Kind::fixed;
    double value = 0.0;  // ρ for frac, c for near_half (n − 2k = c√n), k for fixed

    std::size_t resolve(std::size_t n) const;
};

struct SweepSpec {
    std::vector<std::size_t> n_list;
    std::vector<KRule> k_rules;
    ContaminationKind contamination = ContaminationKind::constant_shift;
    std::optional<double> contamination_param;  // default: 10σ shift, π/ω₀, ...
    NullParams truth;
    NoiseKind noise = NoiseKind::gaussian;
    std::size_t trials = 1;
    std::vector<std::string> estimators;
    std::uint64_t seed = 0;
    double single_frequency_omega = 1.0;

    void validate() const;
    double resolved_param() const;
};

struct TrialResult {
    std::string estimator_id;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t trial = 0;
    double theta_err = 0.0;
    std::optional<double> var_rel_err;
    std::optional<double> tv_err;
    std::uint64_t seed = 0;
    double wall_time = 0.0;  // seconds
    std::string error;       // nonempty when the trial failed
    bool ok() const { return error.empty(); }
};

struct AggregateRow {
    std::string estimator;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t trials = 0;  // successful trials
    double median_err = 0.0;
    double q10 = 0.0;
    double q90 = 0.0;
    double theory_rate = 0.0;
    double ratio = 0.0;
};

struct SweepResult {
    std::vector<TrialResult> trials;
    std::vector<AggregateRow> rows;
};

// Runs every estimator on the same data for every (n, k, trial). Results do
// not depend on the number of worker threads.
SweepResult run_sweep(const SweepSpec& spec, const Hyperparams& hp);

// Rate against which an estimator's target error is compared.
double theory_rate(Target target, std::size_t k, std::size_t n, double sigma2);

// Linear-interpolation quantile (type 7) of unsorted values.
double quantile(std::vector<double> values, double q);

std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result);

// Parses the JSON sweep description documented in README.md.
SweepSpec sweep_spec_from_json(const std::string& text);

}  // namespace nullest
