#pragma once

#include <cstddef>

#include "nullest/types.hpp"

namespace nullest {

struct ModeEstimate {
    double theta_hat = 0.0;
    double h_used = 0.0;
    std::size_t max_count = 0;  // points in the best closed window [t - h, t + h]
};

/*
 * Box-kernel mode: maximises #{j : |t - X_j| <= h} over t. The maximiser set
 * is a disjoint union of closed intervals [X_last - h, X_first + h]; the
 * midpoint of the leftmost one is returned, which is the midpoint of the
 * extreme points of the leftmost maximal window.
 */
ModeEstimate kernel_mode(const Sample& sample, double h);

// h = mode_C1 · sqrt(1 ∨ log(L_delta n / (n - 2k)²)).
double mode_bandwidth(std::size_t k, std::size_t n, const Hyperparams& hp);

// Lower median: order statistic ceil(n/2).
double sample_median(const Sample& sample);

}  // namespace nullest
