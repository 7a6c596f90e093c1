#pragma once

#include <cstddef>

#include "nullest/types.hpp"

namespace nullest {

// Minimax rates for the mean-shift model. All functions require 1 <= k < n/2
// unless noted and throw NotIdentifiable for k >= n/2.

// Squared location rate with regime boundaries at sqrt(n), n/4 and n/2 - sqrt(n).
double rate_location_sq(std::size_t k, std::size_t n, double sigma2);

// Squared relative variance rate; boundary at sqrt(n).
double rate_variance(std::size_t k, std::size_t n);

// Total variation rate 1 ∧ k / (n sqrt(log(1 + k²(n-2k)²/n³))).
double rate_tv(std::size_t k, std::size_t n);

// Huber-model rate; k = 0 allowed.
double huber_rate(std::size_t k, std::size_t n);

// Lower bound on the Huber modulus of continuity; 0 when the log argument is <= 1.
double huber_modulus(double eps);

// eps(k, n) = k / (n sqrt(log(1 + k²(n-2k)²/n³))), the adaptive location scale.
double eps_location(std::size_t k, std::size_t n);

// eps_var(k, n) = k / (n log(1 + k / sqrt(n))), the adaptive variance scale.
double eps_variance(std::size_t k, std::size_t n);

// log(1 + k²(n-2k)²/n³), the quantity under the square root in tau.
double tau_log_term(std::size_t k, std::size_t n);

struct RatePoint {
    std::size_t k = 0;
    std::size_t n = 0;
    double location_rate_sq = 0.0;
    double variance_rate = 0.0;
    double tv_rate = 0.0;
};

RatePoint rate_point(std::size_t k, std::size_t n, double sigma2 = 1.0);

// Two-Gaussian TV surrogate 1 ∧ (|σ1² − σ2²|/(σ1² ∨ σ2²) ∨ |μ1 − μ2|/(σ1 ∨ σ2)).
double tv_gaussian_surrogate(const NullParams& p, const NullParams& q);

// Throws NotIdentifiable unless 2k < n.
void require_identifiable(std::size_t k, std::size_t n);

}  // namespace nullest
