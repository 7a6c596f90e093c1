#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nullest/types.hpp"

namespace nullest {

struct PilotConfig {
    std::size_t m = 1;    // number of random subsets
    std::size_t ell = 3;  // subset size
    std::uint64_t seed = 0;

    // m = min(ceil(n^C1_pilot), m_cap), ell = clamp(ceil(C2_pilot ln n), 3, n).
    static PilotConfig defaults(std::size_t n, const Hyperparams& hp, std::uint64_t seed);
};

struct VarianceEstimate {
    double sigma2_hat = 0.0;
    double a_used = 0.0;
    double b_used = 0.0;
    double omega_argmin = 0.0;
    double pilot_sigma2 = 0.0;
};

// Minimum unbiased sample variance over m random size-ell subsets. Subset r
// is drawn from the stream keyed (seed, r). Throws InvalidArgument if every
// subset is constant.
double pilot_variance(const Sample& sample, const PilotConfig& cfg);

// a = c_a / sigma_tilde · sqrt(1 ∨ log(e k² / n)), b = 100 a.
std::pair<double, double> variance_frequency_window(double sigma_tilde, std::size_t k, std::size_t n,
                                                    const Hyperparams& hp);

// Frequencies with N̂(ω) at or below this are excluded from the infimum.
double ecf_floor(std::size_t n, const Hyperparams& hp);

/*
 * N̂ on the log lattice (c_a/σ̃)·100^{j/(count-1)}, shared by the windows of
 * every k. A window [a, 100a] is scanned at a, b and the lattice points
 * strictly between them (at least `variance_grid_points` frequencies), so a
 * scan over many k evaluates each frequency once. Read-only after prepare().
 */
class VarianceWindowCache {
public:
    VarianceWindowCache(const Sample& sample, double pilot_sigma2, const Hyperparams& hp);

    // Evaluates the lattice points of the windows of `ks` (in parallel).
    void prepare(std::span<const std::size_t> ks);
    // Lattice points outside the prepared range are evaluated on the fly.
    VarianceEstimate estimate(std::size_t k) const;
    double pilot_sigma2() const { return pilot_sigma2_; }

private:
    double lattice(long j) const;
    double norm_at(long j) const;

    const Sample* sample_;
    const Hyperparams* hp_;
    double pilot_sigma2_;
    double base_;
    double log_ratio_;
    long first_ = 0;
    std::vector<double> norms_;
};

// inf over a log-spaced grid on [a, 100a] of -2 log N̂(ω) / ω², with the
// pilot computed from `seed`.
VarianceEstimate estimate_variance(const Sample& sample, std::size_t k, const Hyperparams& hp, std::uint64_t seed);

// Same, reusing an already computed pilot variance.
VarianceEstimate estimate_variance_with_pilot(const Sample& sample, std::size_t k, double pilot_sigma2,
                                              const Hyperparams& hp);

// -2 log N̂(ω) / ω² at a single frequency; throws EcfDegenerate if N̂(ω) = 0.
double single_frequency_variance(const Sample& sample, double omega);

// max over a uniform grid on [α, 100α] of (1/k) Σ cos(ω γ_j).
double cosine_supremum(std::span<const double> gammas, double alpha, std::size_t grid_points);

}  // namespace nullest
