#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "nullest/ecf.hpp"
#include "nullest/types.hpp"

namespace nullest {

struct DiskFitResult {
    double residual = 0.0;
    Complex zeta_opt;
    bool saturated = false;
};

// inf over |ζ| <= 1 of |a - (n-k)/n - (k/n) ζ|, solved in closed form.
DiskFitResult inner_disk_fit(Complex a, std::size_t k, std::size_t n);

/*
 * Characteristic function ψ_F of the noise. The parameter v passed to cf()
 * is the variance for the Gaussian kind and the squared scale b² for the
 * Laplace kind (ψ_F = 1/(1 + vω²)); custom kinds ignore it.
 */
class NoiseModel {
public:
    enum class Kind { gaussian, laplace, custom };

    static NoiseModel gaussian();
    static NoiseModel laplace();
    static NoiseModel custom(std::function<Complex(double)> cf);

    Kind kind() const { return kind_; }
    Complex cf(double omega, double v = 1.0) const;
    // 1/ψ_F(ω). Throws NumericalOverflow when the Gaussian multiplier exceeds
    // e^700 and EcfDegenerate when |ψ_F(ω)| < 1e-300.
    Complex inverse_cf(double omega, double v = 1.0) const;
    // Built-in kinds are real and even, so ω >= 0 suffices on symmetric grids.
    bool real_even() const { return kind_ != Kind::custom; }

private:
    Kind kind_ = Kind::gaussian;
    std::function<Complex(double)> custom_;
};

struct GridDescription {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
    std::size_t count = 0;
};

struct LocationEstimate {
    double theta_hat = 0.0;
    std::optional<double> v_hat;
    double objective_value = 0.0;
    GridDescription mu_grid_used;
    double tau_used = 0.0;
    double sigma2_hat = 0.0;    // variance estimate used (unknown-variance variant)
    double pilot_sigma2 = 0.0;  // pilot used (unknown-variance variant)
};

// τ = 1 ∨ c_tau sqrt(log(1 + k²(n-2k)²/n³)).
double tau_known_var(std::size_t k, std::size_t n, const Hyperparams& hp);

// τ = sqrt(const · k(n-2k)/n^{3/2}), so that 1/ψ_F(τ) ≈ k(n-2k)/n^{3/2} for unit Laplace noise.
double laplace_tau(std::size_t k, std::size_t n, double constant = 1.0);

// sup over grid points of the disk-fit residual of
// A(ω) = (1/n) Σ e^{iω(X_j − μ)} / ψ_F(ω).
double objective(const Sample& sample, double mu, double v, std::size_t k, const FrequencyGrid& grid,
                 const NoiseModel& noise);

// Grid minimiser of the objective with known σ².
LocationEstimate estimate_location_known_var(const Sample& sample, std::size_t k, double sigma2,
                                             const Hyperparams& hp);

// [σ₋², σ₊²] = σ̂²(1 ∓ R k / (n log(1 + k/√n))), lower end floored at 1e-12 σ̂².
std::pair<double, double> sigma_interval(double sigma2_hat, std::size_t k, std::size_t n, const Hyperparams& hp);

// Joint (μ, v) grid minimiser; computes the pilot and variance estimates.
LocationEstimate estimate_location_unknown_var(const Sample& sample, std::size_t k, const Hyperparams& hp,
                                               std::uint64_t seed);

// Same, given the variance estimate σ̂² (and the pilot, reported only).
LocationEstimate estimate_location_unknown_var_from(const Sample& sample, std::size_t k, double sigma2_hat,
                                                    const Hyperparams& hp);

// τ used by the unknown-variance estimator: σ̂⁻¹ · tau_known_var.
double tau_unknown_var(std::size_t k, std::size_t n, double sigma2_hat, const Hyperparams& hp);

// Deconvolution variant for noise F at unit scale.
LocationEstimate estimate_location_general(const Sample& sample, std::size_t k, const NoiseModel& noise, double tau,
                                           const Hyperparams& hp);

}  // namespace nullest
