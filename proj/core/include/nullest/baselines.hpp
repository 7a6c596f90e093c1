#pragma once

#include <functional>

#include "nullest/ecf.hpp"
#include "nullest/types.hpp"

namespace nullest {

struct CaiJinConfig {
    double omega_star = 1.0;
    double fd_step = 1e-4;

    void validate() const;
};

// A characteristic function together with its derivative in t.
struct DifferentiableCf {
    std::function<Complex(double)> value;
    std::function<Complex(double)> derivative;
};

// ψ₀(t) = e^{iθt − σ²t²/2} with its analytic derivative.
DifferentiableCf null_cf(double theta, double sigma2);

// μ(t; ξ) = Im(conj(ξ) ξ′) / |ξ|².
double caijin_mu(const DifferentiableCf& xi, double t);

// v(t; ξ) = −(d/dt |ξ|) / (t |ξ|), with d|ξ|/dt = Re(conj(ξ) ξ′)/|ξ|.
double caijin_v(const DifferentiableCf& xi, double t);

// μ(ω*; ψ̂) using the central-difference derivative of the ECF.
double caijin_location(const Sample& sample, const CaiJinConfig& cfg);

// v(ω*; ψ̂) using a central difference of the ECF modulus.
double caijin_variance(const Sample& sample, const CaiJinConfig& cfg);

}  // namespace nullest
