#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nullest/types.hpp"

namespace nullest {

struct Interval {
    double center = 0.0;
    double halfwidth = 0.0;  // +inf marks a k whose estimate failed (no constraint)
};

struct LepskiTrace {
    std::vector<std::size_t> k_grid;
    std::vector<Interval> intervals;  // aligned with k_grid
    std::vector<double> estimates;    // per-k point estimates (NaN on failure)
    std::size_t k_prime = 0;          // first k whose suffix intersection is nonempty
    double estimate = 0.0;
    bool fallback_used = false;
    double pilot_sigma2 = 0.0;
};

struct SuffixIntersection {
    std::size_t index = 0;  // position of k' in the grid
    double lo = 0.0;
    double hi = 0.0;
};

// Intersects J_k from the largest k downward and returns the smallest index
// whose suffix intersection is nonempty, with that intersection.
std::optional<SuffixIntersection> suffix_intersection(std::span<const Interval> intervals);

// {1, round(1.25), ...} thinned geometrically, always containing 1 and k_max.
std::vector<std::size_t> geometric_k_grid(std::size_t k_max, double ratio);

// Largest k of the location grid: floor(n/2 - c_delta sqrt(n)).
std::size_t lepski_location_kmax(std::size_t n, const Hyperparams& hp);

LepskiTrace lepski_location(const Sample& sample, const Hyperparams& hp, std::uint64_t seed);

LepskiTrace lepski_variance(const Sample& sample, const Hyperparams& hp, std::uint64_t seed);

struct AdaptiveNull {
    NullParams estimate;
    LepskiTrace location;
    LepskiTrace variance;
    std::optional<double> tv_to_truth;
};

// N(θ̂, σ̂²) from both Lepski procedures; the TV surrogate to `truth` is
// reported when a truth is supplied.
AdaptiveNull adaptive_null_estimate(const Sample& sample, const Hyperparams& hp, std::uint64_t seed,
                                    std::optional<NullParams> truth = std::nullopt);

}  // namespace nullest
