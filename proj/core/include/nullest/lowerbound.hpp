#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nullest/rng.hpp"
#include "nullest/types.hpp"

namespace nullest {

/*
 * The CF-matching prior pair. With λ = ε/(1+2ε), τ = 1 ∨ B_c sqrt(log(e n ε²(1−2ε)²))
 * and μ = c₀λ/τ, the marginals
 *   f₀ = ((1−ε)δ₀   + ε(g₀ ∗ δ_μ)) ∗ φ,  g₀ = 2ε δ_μ  + (1−2ε) p₀
 *   f₁ = ((1−ε)δ_2μ + ε(g₁ ∗ δ_μ)) ∗ φ,  g₁ = 2ε δ_−μ + (1−2ε) p₁
 * have identical Fourier transforms on |t| < τ when p₁ = p₀ + Δ.
 */
struct PriorConstruction {
    double eps = 0.0;
    double lambda = 0.0;
    double tau = 1.0;
    double mu = 0.0;
    double c0 = 1.0 / 24.0;
    double Bc = 3.0;
    std::size_t n = 0;

    static PriorConstruction make(double eps, std::size_t n, double c0, double Bc);
    // (1−λ)/λ, the amplitude of the perturbation's Fourier transform.
    double amplitude() const;
    // Null location of arm 0 (0) or arm 1 (2μ).
    double arm_theta(int arm) const;
};

enum class GridRule { trapezoid, simpson };

struct DensityGrid {
    std::vector<double> xs;
    std::vector<double> values;
    GridRule quadrature = GridRule::trapezoid;

    // `count` equally spaced abscissae on [lo, hi] with zero values.
    static DensityGrid uniform(double lo, double hi, std::size_t count, GridRule rule = GridRule::trapezoid);
    double step() const;
    // Quadrature of `values` (or of another vector on the same abscissae).
    double integrate() const;
    double integrate(const std::vector<double>& ys) const;
};

// The verification grid: ±(20 + 100/τ) with 2^14 + 1 points.
DensityGrid verification_grid(const PriorConstruction& pc);

// τ/4 for |x| <= 1/τ, 1/(4τx²) otherwise.
double p0_density(double x, double tau);

// Δ(x) by adaptive Simpson on the two sine integrals.
double delta_eval(double x, const PriorConstruction& pc, double quad_tol = 1e-10);

// Δ(x) from the closed form of the sine integrals (Gauss-Legendre near 0).
double delta_closed_form(double x, const PriorConstruction& pc);

struct P1Report {
    double min_p1 = 0.0;
    double integral_p1 = 0.0;
    double integral_delta = 0.0;
    bool c0_within_contract = true;
    bool min_ok = false;
    bool integral_ok = false;
    bool delta_ok = false;
    bool passed() const { return min_ok && integral_ok && delta_ok && c0_within_contract; }
};

// min p₁ on the grid, ∫p₁ (with p₀'s analytic tail) and ∫Δ on the grid.
P1Report verify_p1(const PriorConstruction& pc, const DensityGrid& grid);

// Marginal density f_arm of the construction.
class MixtureDensity {
public:
    MixtureDensity(const PriorConstruction& pc, int arm);
    double operator()(double x) const;
    int arm() const { return arm_; }
    const PriorConstruction& construction() const { return pc_; }

private:
    PriorConstruction pc_;
    int arm_;
};

// (p ∗ φ)(z) for p = p₀ (arm 0) or p₁ = p₀ + Δ (arm 1).
double convolved_prior(double z, const PriorConstruction& pc, int arm);

// f₁(x) − f₀(x), evaluated without cancellation between the two densities.
double mixture_difference(double x, const PriorConstruction& pc);

struct MixturePair {
    MixtureDensity f0;
    MixtureDensity f1;
};

MixturePair build_mixture_pair(const PriorConstruction& pc);

struct MixtureReport {
    double integral_f0 = 0.0;
    double integral_f1 = 0.0;
    double cf_match_max = 0.0;  // max over |t| <= 0.99τ of |f̂₁(t) − f̂₀(t)|
    double chi2_estimate = 0.0; // ∫ (f₁ − f₀)² / f₀
    bool integrals_ok = false;
    bool cf_ok = false;
    bool chi2_ok = false;
    bool passed() const { return integrals_ok && cf_ok && chi2_ok; }
};

// Fourier transforms and χ² by trapezoid on `grid`; 256 t-points on [−0.99τ, 0.99τ].
MixtureReport verify_mixture(const PriorConstruction& pc, const DensityGrid& grid);

double sample_p0(Stream& rng, double tau);
// Rejection sampler with proposal p₀ and envelope 2p₀.
double sample_p1(Stream& rng, const PriorConstruction& pc);
// A draw from the contamination shift γ of arm `arm`, relative to arm_theta:
// g₀ ∗ δ_μ for arm 0 and g₁ ∗ δ_−μ for arm 1.
double sample_prior_shift(Stream& rng, const PriorConstruction& pc, int arm);

// n i.i.d. draws from f_arm.
Sample sample_mixture(const PriorConstruction& pc, int arm, std::size_t n, std::uint64_t seed);

struct TwoBlockDraw {
    Sample sample;
    NullParams truth;
    std::vector<double> gamma;
};

// ψ² = log(1 + n/(n−2k)²). Arm 0: θ = Cψ, γ = −2Cψ on a uniform k-subset of
// the first half; arm 1: θ = −Cψ, γ = +2Cψ on a k-subset of the second half.
double two_block_psi(std::size_t k, std::size_t n);
TwoBlockDraw two_block_prior_sample(std::size_t k, std::size_t n, double C, int arm, std::uint64_t seed);

}  // namespace nullest
