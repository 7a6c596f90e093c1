#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "nullest/adaptation.hpp"
#include "nullest/location.hpp"
#include "nullest/parallel.hpp"
#include "nullest/rates.hpp"
#include "nullest/rng.hpp"
#include "nullest/sim.hpp"
#include "nullest/variance.hpp"
#include "oracles.hpp"

using namespace nullest;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest index whose suffix has a nonempty common intersection, by brute force.
std::optional<std::size_t> brute_first(const std::vector<Interval>& iv) {
    std::optional<std::size_t> best;
    for (std::size_t i = iv.size(); i-- > 0;) {
        double lo = -kInf, hi = kInf;
        for (std::size_t j = i; j < iv.size(); ++j) {
            lo = std::max(lo, iv[j].center - iv[j].halfwidth);
            hi = std::min(hi, iv[j].center + iv[j].halfwidth);
        }
        if (lo <= hi) best = i;
        else break;
    }
    return best;
}

Sample null_sample(std::size_t n, std::uint64_t seed, double theta, double sigma) {
    return generate_frequentist({theta, sigma * sigma}, ContaminationSpec{}, n, seed);
}

}  // namespace

TEST(SuffixIntersection, MatchesBruteForce) {
    Stream s(1);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<Interval> iv(1 + s.below(10));
        for (auto& J : iv) J = {4.0 * s.uniform() - 2.0, 2.0 * s.uniform()};
        const auto hit = suffix_intersection(iv);
        const auto ref = brute_first(iv);
        ASSERT_EQ(hit.has_value(), ref.has_value());
        if (!hit) continue;
        EXPECT_EQ(hit->index, *ref);
        EXPECT_LE(hit->lo, hit->hi);
        for (std::size_t j = hit->index; j < iv.size(); ++j) {
            EXPECT_GE(hit->lo, iv[j].center - iv[j].halfwidth);
            EXPECT_LE(hit->hi, iv[j].center + iv[j].halfwidth);
        }
    }
}

TEST(SuffixIntersection, MonotoneNonemptiness) {
    const std::vector<Interval> iv = {{5.0, 0.1}, {0.0, 1.0}, {0.5, 1.0}, {0.2, 0.5}};
    const auto hit = suffix_intersection(iv);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->index, 1u);
    for (std::size_t i = hit->index; i < iv.size(); ++i)
        EXPECT_TRUE(suffix_intersection(std::span<const Interval>(iv).subspan(i)));
}

TEST(SuffixIntersection, UnconstrainedIntervalsAreSkipped) {
    const std::vector<Interval> iv = {{0.0, 1.0}, {9.0, kInf}, {0.5, 1.0}};
    const auto hit = suffix_intersection(iv);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->index, 0u);
    EXPECT_EQ(hit->lo, -0.5);
    EXPECT_EQ(hit->hi, 1.0);
    EXPECT_FALSE(suffix_intersection(std::vector<Interval>{{0.0, kInf}}));
}

TEST(KGrid, Geometric) {
    for (std::size_t kmax : {1u, 2u, 17u, 910u, 4999u}) {
        const auto g = geometric_k_grid(kmax, 1.25);
        EXPECT_EQ(g.front(), 1u);
        EXPECT_EQ(g.back(), kmax);
        for (std::size_t i = 1; i < g.size(); ++i) {
            EXPECT_LT(g[i - 1], g[i]);
            if (g[i - 1] >= 8 && i + 1 < g.size()) {
                EXPECT_LE(static_cast<double>(g[i]), 1.25 * static_cast<double>(g[i - 1]) + 1.0);
            }
        }
    }
    EXPECT_THROW(geometric_k_grid(0, 1.25), InvalidArgument);
    EXPECT_THROW(geometric_k_grid(10, 1.0), InvalidArgument);
}

TEST(KGrid, LocationTop) {
    const Hyperparams hp;
    EXPECT_EQ(lepski_location_kmax(2000, hp), static_cast<std::size_t>(std::floor(1000.0 - 2.0 * std::sqrt(2000.0))));
    EXPECT_THROW(lepski_location_kmax(4, hp), InvalidArgument);
}

TEST(KGrid, VarianceHalfwidthsNondecreasing) {
    const auto g = geometric_k_grid(999, 1.25);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GE(eps_variance(g[i], 2000), eps_variance(g[i - 1], 2000));
}

TEST(LepskiLocation, PureNull) {
    const Hyperparams hp;
    const std::size_t n = 1000, trials = 100;
    std::vector<int> ok(trials);
    parallel_for(trials, [&](std::size_t t) {
        const auto tr = lepski_location(null_sample(n, hash_key({300, t}), 2.0, 1.0), hp, t);
        ok[t] = std::abs(tr.estimate - 2.0) <= 10.0 / std::sqrt(static_cast<double>(n));
    });
    EXPECT_GE(std::accumulate(ok.begin(), ok.end(), 0), 90);
}

TEST(LepskiLocation, TraceInvariants) {
    const Hyperparams hp;
    const Sample x = generate_frequentist({0.0, 1.0}, ContaminationSpec{100, ContaminationKind::constant_shift, 8.0, {}},
                                          800, 4);
    const auto tr = lepski_location(x, hp, 1);
    ASSERT_EQ(tr.intervals.size(), tr.k_grid.size());
    ASSERT_EQ(tr.estimates.size(), tr.k_grid.size());
    ASSERT_FALSE(tr.fallback_used);
    const Interval& top = tr.intervals.back();
    EXPECT_LE(std::abs(tr.estimate - top.center), top.halfwidth);
    const auto hit = suffix_intersection(tr.intervals);
    ASSERT_TRUE(hit);
    EXPECT_EQ(tr.k_prime, tr.k_grid[hit->index]);
    EXPECT_GE(tr.estimate, hit->lo);
    EXPECT_LE(tr.estimate, hit->hi);
}

TEST(LepskiLocation, DeterministicAcrossThreadCounts) {
    const Hyperparams hp;
    const Sample x = generate_frequentist({0.0, 1.0}, ContaminationSpec{60, ContaminationKind::constant_shift, 8.0, {}},
                                          500, 5);
    set_worker_count(1);
    const auto a = lepski_location(x, hp, 9);
    set_worker_count(4);
    const auto b = lepski_location(x, hp, 9);
    set_worker_count(0);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.k_prime, b.k_prime);
    EXPECT_EQ(a.estimates, b.estimates);
}

TEST(LepskiVariance, PureNull) {
    const Hyperparams hp;
    const std::size_t n = 2000, trials = 100;
    std::vector<double> rel(trials);
    parallel_for(trials, [&](std::size_t t) {
        rel[t] = std::abs(lepski_variance(null_sample(n, hash_key({301, t}), -1.0, 3.0), hp, t).estimate / 9.0 - 1.0);
    });
    EXPECT_LE(oracle::median(rel), 10.0 / std::sqrt(static_cast<double>(n)));
}

TEST(LepskiVariance, AdversarialPairedWithOracle) {
    const Hyperparams hp;
    const std::size_t n = 2000, k = 600, trials = 100;
    std::vector<int> ok(trials);
    parallel_for(trials, [&](std::size_t t) {
        const Sample x = generate_frequentist(
            {0.0, 1.0}, ContaminationSpec{k, ContaminationKind::pi_over_omega, std::numbers::pi, {}}, n, hash_key({302, t}));
        const double oracle_err = std::abs(estimate_variance(x, k, hp, t).sigma2_hat - 1.0);
        const double adapt_err = std::abs(lepski_variance(x, hp, t).estimate - 1.0);
        ok[t] = adapt_err <= 3.0 * oracle_err;
    });
    EXPECT_GE(std::accumulate(ok.begin(), ok.end(), 0), 90);
}

TEST(LepskiVariance, FallbackIsOne) {
    // Halfwidth zero makes every pair of distinct estimates disjoint.
    Hyperparams hp;
    hp.lepski_var_mult = 0.0;
    const auto tr = lepski_variance(null_sample(300, 6, 0.0, 2.0), hp, 1);
    if (tr.fallback_used) {
        EXPECT_EQ(tr.estimate, 1.0);
        EXPECT_EQ(tr.k_prime, 0u);
    } else {
        EXPECT_EQ(tr.k_prime, tr.k_grid.back());
    }
}

TEST(AdaptiveNull, PureNullTv) {
    const Hyperparams hp;
    const std::size_t n = 5000, trials = 20;
    std::vector<double> tv(trials);
    parallel_for(trials, [&](std::size_t t) {
        const auto a = adaptive_null_estimate(null_sample(n, hash_key({303, t}), 0.0, 1.0), hp, t, NullParams{0.0, 1.0});
        tv[t] = *a.tv_to_truth;
    });
    EXPECT_LE(oracle::median(tv), 15.0 / std::sqrt(static_cast<double>(n)));
}

TEST(AdaptiveNull, NearHalfCapped) {
    const Hyperparams hp;
    const Sample x = generate_frequentist({0.0, 1.0}, ContaminationSpec{295, ContaminationKind::two_sided_blocks, 6.0, {}},
                                          600, 7);
    const auto a = adaptive_null_estimate(x, hp, 1, NullParams{0.0, 1.0});
    ASSERT_TRUE(a.tv_to_truth);
    EXPECT_LE(*a.tv_to_truth, 1.0);
    EXPECT_GT(a.estimate.sigma2, 0.0);
}

TEST(AdaptiveNull, ShiftEquivariant) {
    const Hyperparams hp;
    const Sample x = generate_frequentist({0.0, 1.0}, ContaminationSpec{80, ContaminationKind::constant_shift, 8.0, {}},
                                          600, 8);
    const auto a = adaptive_null_estimate(x, hp, 3);
    const auto b = adaptive_null_estimate(x.shifted(250.0), hp, 3);
    EXPECT_NEAR(b.estimate.sigma2 / a.estimate.sigma2, 1.0, 1e-6);
    const double step = hp.mu_grid_step_mult * std::sqrt(a.location.pilot_sigma2) * eps_location(a.location.k_grid.back(), 600);
    EXPECT_NEAR(b.estimate.theta, a.estimate.theta + 250.0, step);
    EXPECT_FALSE(a.tv_to_truth);
}
