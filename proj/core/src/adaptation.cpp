#include "nullest/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nullest/location.hpp"
#include "nullest/parallel.hpp"
#include "nullest/rates.hpp"
#include "nullest/variance.hpp"

namespace nullest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void finish(LepskiTrace& trace, double fallback) {
    const auto hit = suffix_intersection(trace.intervals);
    if (!hit) {
        trace.fallback_used = true;
        trace.estimate = fallback;
        trace.k_prime = 0;
        return;
    }
    trace.k_prime = trace.k_grid[hit->index];
    trace.estimate = hit->lo + (hit->hi - hit->lo) / 2.0;
}

double pilot_for(const Sample& sample, const Hyperparams& hp, std::uint64_t seed) {
    return pilot_variance(sample, PilotConfig::defaults(sample.size(), hp, seed));
}

}  // namespace

std::optional<SuffixIntersection> suffix_intersection(std::span<const Interval> intervals) {
    double lo = -kInf;
    double hi = kInf;
    std::optional<SuffixIntersection> out;
    for (std::size_t i = intervals.size(); i-- > 0;) {
        const Interval& J = intervals[i];
        const double next_lo = std::max(lo, J.center - J.halfwidth);
        const double next_hi = std::min(hi, J.center + J.halfwidth);
        if (!(next_lo <= next_hi)) break;
        lo = next_lo;
        hi = next_hi;
        out = SuffixIntersection{i, lo, hi};
    }
    // An all-unconstrained suffix carries no information.
    if (out && !(std::isfinite(out->lo) && std::isfinite(out->hi))) return std::nullopt;
    return out;
}

std::vector<std::size_t> geometric_k_grid(std::size_t k_max, double ratio) {
    if (k_max < 1) throw InvalidArgument("k grid needs k_max >= 1");
    if (!(ratio > 1.0)) throw InvalidArgument("k grid ratio must exceed 1");
    std::vector<std::size_t> grid;
    double k = 1.0;
    std::size_t last = 0;
    while (true) {
        const auto kk = static_cast<std::size_t>(std::llround(k));
        if (kk >= k_max) break;
        if (kk > last) {
            grid.push_back(kk);
            last = kk;
        }
        k = std::max(k * ratio, static_cast<double>(kk) + 1.0);
    }
    grid.push_back(k_max);
    return grid;
}

std::size_t lepski_location_kmax(std::size_t n, const Hyperparams& hp) {
    const double top = std::floor(static_cast<double>(n) / 2.0 - hp.lepski_c_delta * std::sqrt(static_cast<double>(n)));
    if (top < 1.0) throw InvalidArgument("n too small for the Lepski location grid");
    std::size_t k = static_cast<std::size_t>(top);
    while (2 * k >= n) --k;
    return k;
}

namespace {

LepskiTrace location_trace(const Sample& sample, const Hyperparams& hp, const VarianceWindowCache& cache,
                           const std::vector<std::size_t>& k_grid) {
    const std::size_t n = sample.size();
    LepskiTrace trace;
    trace.k_grid = k_grid;
    trace.pilot_sigma2 = cache.pilot_sigma2();
    const double sigma_tilde = std::sqrt(trace.pilot_sigma2);

    const std::size_t m = trace.k_grid.size();
    trace.intervals.assign(m, Interval{0.0, kInf});
    trace.estimates.assign(m, std::numeric_limits<double>::quiet_NaN());
    parallel_for(m, [&](std::size_t i) {
        const std::size_t k = trace.k_grid[i];
        try {
            const VarianceEstimate var = cache.estimate(k);
            const LocationEstimate loc = estimate_location_unknown_var_from(sample, k, var.sigma2_hat, hp);
            trace.estimates[i] = loc.theta_hat;
            trace.intervals[i] = {loc.theta_hat, hp.lepski_loc_mult * sigma_tilde * eps_location(k, n)};
        } catch (const Error&) {
            // A failed k leaves J_k unconstrained.
        }
    });
    finish(trace, 0.0);
    return trace;
}

LepskiTrace variance_trace(const Sample& sample, const Hyperparams& hp, const VarianceWindowCache& cache,
                           const std::vector<std::size_t>& k_grid) {
    const std::size_t n = sample.size();
    LepskiTrace trace;
    trace.k_grid = k_grid;
    trace.pilot_sigma2 = cache.pilot_sigma2();

    const std::size_t m = trace.k_grid.size();
    trace.intervals.assign(m, Interval{0.0, kInf});
    trace.estimates.assign(m, std::numeric_limits<double>::quiet_NaN());
    parallel_for(m, [&](std::size_t i) {
        const std::size_t k = trace.k_grid[i];
        try {
            const VarianceEstimate var = cache.estimate(k);
            trace.estimates[i] = var.sigma2_hat;
            trace.intervals[i] = {var.sigma2_hat, hp.lepski_var_mult * trace.pilot_sigma2 * eps_variance(k, n)};
        } catch (const Error&) {
        }
    });
    finish(trace, 1.0);
    return trace;
}

std::vector<std::size_t> variance_k_grid(std::size_t n, const Hyperparams& hp) {
    if (n < 8) throw InvalidArgument("Lepski variance needs n >= 8");
    return geometric_k_grid((n - 1) / 2, hp.lepski_ratio);
}

}  // namespace

LepskiTrace lepski_location(const Sample& sample, const Hyperparams& hp, std::uint64_t seed) {
    const auto k_grid = geometric_k_grid(lepski_location_kmax(sample.size(), hp), hp.lepski_ratio);
    VarianceWindowCache cache(sample, pilot_for(sample, hp, seed), hp);
    cache.prepare(k_grid);
    return location_trace(sample, hp, cache, k_grid);
}

LepskiTrace lepski_variance(const Sample& sample, const Hyperparams& hp, std::uint64_t seed) {
    const auto k_grid = variance_k_grid(sample.size(), hp);
    VarianceWindowCache cache(sample, pilot_for(sample, hp, seed), hp);
    cache.prepare(k_grid);
    return variance_trace(sample, hp, cache, k_grid);
}

AdaptiveNull adaptive_null_estimate(const Sample& sample, const Hyperparams& hp, std::uint64_t seed,
                                    std::optional<NullParams> truth) {
    const auto loc_grid = geometric_k_grid(lepski_location_kmax(sample.size(), hp), hp.lepski_ratio);
    const auto var_grid = variance_k_grid(sample.size(), hp);
    VarianceWindowCache cache(sample, pilot_for(sample, hp, seed), hp);
    cache.prepare(var_grid);  // the variance grid covers the location grid's windows

    AdaptiveNull out;
    out.location = location_trace(sample, hp, cache, loc_grid);
    out.variance = variance_trace(sample, hp, cache, var_grid);
    out.estimate.theta = out.location.estimate;
    out.estimate.sigma2 = out.variance.estimate > 0.0 ? out.variance.estimate : 1.0;
    if (truth) out.tv_to_truth = tv_gaussian_surrogate(out.estimate, *truth);
    return out;
}

}  // namespace nullest
