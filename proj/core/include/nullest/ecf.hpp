#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nullest/types.hpp"

namespace nullest {

using Complex = std::complex<double>;

// Frequencies at which a supremum or infimum is taken.
struct FrequencyGrid {
    double lo = 0.0;
    double hi = 0.0;
    double step = 1.0;
    std::vector<double> points;

    // {lo, lo + step, ...} ∪ {hi}, plus 0 when lo < 0 < hi.
    static FrequencyGrid uniform(double lo, double hi, double step);
    // Points j·step for |j·step| < tau, plus ±tau; symmetric with 0 included.
    static FrequencyGrid symmetric(double tau, double step);
};

// ψ̂(ω) = (1/n) Σ e^{iωX_j}, trig sums accumulated pairwise.
Complex ecf_eval(const Sample& sample, double omega);

// Unnormalised Σ e^{iω(X_j − shift)}; exact at X_j = shift.
Complex ecf_sum(const Sample& sample, double omega, double shift = 0.0);

// N̂(ω) = |ψ̂(ω)|.
double ecf_norm(const Sample& sample, double omega);

// Central difference (ψ̂(ω+h) − ψ̂(ω−h)) / 2h.
Complex ecf_derivative(const Sample& sample, double omega, double h);

// Default derivative step 1e-4·(1 ∨ |ω|).
double default_fd_step(double omega);

// ψ̂ at each frequency; evaluated in parallel, results in input order.
std::vector<Complex> ecf_on_grid(const Sample& sample, std::span<const double> omegas);

}  // namespace nullest
