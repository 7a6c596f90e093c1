#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nullest/parallel.hpp"
#include "nullest/rng.hpp"
#include "nullest/sim.hpp"
#include "nullest/variance.hpp"
#include "oracles.hpp"

using namespace nullest;

namespace {

Sample null_sample(std::size_t n, std::uint64_t seed, double theta = 0.0, double sigma = 1.0) {
    Stream s(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = theta + sigma * s.normal();
    return Sample(v);
}

}  // namespace

TEST(Pilot, FullSubsetIsExactSampleVariance) {
    std::vector<double> x;
    for (int i = 0; i < 11; ++i) x.push_back(2.0 + 0.5 * i);
    // Unbiased variance of an arithmetic sequence: d² m(m+1)/12.
    EXPECT_NEAR(pilot_variance(Sample(x), {1, x.size(), 7}), 0.25 * 11.0 * 12.0 / 12.0, 1e-12);
}

TEST(Pilot, Homogeneous) {
    const Sample s = null_sample(500, 1);
    const PilotConfig cfg = PilotConfig::defaults(500, Hyperparams{}, 3);
    EXPECT_NEAR(pilot_variance(s.scaled(3.0), cfg), 9.0 * pilot_variance(s, cfg), 1e-12);
    EXPECT_NEAR(pilot_variance(s.shifted(4.0), cfg) / pilot_variance(s, cfg), 1.0, 1e-12);
}

TEST(Pilot, DefaultsFollowSizeRules) {
    const Hyperparams hp;
    const auto cfg = PilotConfig::defaults(1000, hp, 0);
    EXPECT_EQ(cfg.ell, static_cast<std::size_t>(std::ceil(2.8 * std::log(1000.0))));
    EXPECT_EQ(cfg.m, std::min<std::size_t>(hp.m_cap, static_cast<std::size_t>(std::ceil(std::pow(1000.0, 1.5)))));
    EXPECT_EQ(PilotConfig::defaults(3, hp, 0).ell, 3u);
    EXPECT_EQ(PilotConfig::defaults(4, hp, 0).ell, 4u);
}

TEST(Pilot, ConstantDataIsAnError) {
    EXPECT_THROW(pilot_variance(Sample(std::vector<double>(20, 1.0)), {10, 5, 1}), InvalidArgument);
    EXPECT_THROW(pilot_variance(null_sample(10, 2), {1, 11, 1}), InvalidArgument);
}

TEST(Pilot, SkipsConstantSubsets) {
    std::vector<double> x(20, 0.0);
    x[0] = 1.0;
    const double v = pilot_variance(Sample(x), {200, 3, 4});
    EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
}

TEST(Pilot, CoverageUnderNull) {
    const Hyperparams hp;
    int inside = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        const double v = pilot_variance(null_sample(1000, 1000 + t), PilotConfig::defaults(1000, hp, t));
        inside += v >= 0.1 && v <= 10.0;
    }
    EXPECT_GE(inside, 190);
}

TEST(Window, Examples) {
    Hyperparams hp;
    auto [a, b] = variance_frequency_window(2.0, 10, 10000, hp);
    EXPECT_DOUBLE_EQ(a, hp.c_a / 2.0);
    EXPECT_DOUBLE_EQ(b, 100.0 * a);
    hp.c_a = 0.25;
    std::tie(a, b) = variance_frequency_window(2.0, 4000, 10000, hp);
    EXPECT_NEAR(a, 0.125 * std::sqrt(std::log(std::exp(1.0) * 1600.0)), 1e-14);
    EXPECT_DOUBLE_EQ(b / a, 100.0);
}

TEST(Estimate, WindowInvariants) {
    const Sample s = null_sample(2000, 3);
    const auto est = estimate_variance(s, 100, Hyperparams{}, 1);
    EXPECT_GT(est.sigma2_hat, 0.0);
    EXPECT_DOUBLE_EQ(est.b_used, 100.0 * est.a_used);
    EXPECT_GE(est.omega_argmin, est.a_used);
    EXPECT_LE(est.omega_argmin, est.b_used);
}

TEST(Estimate, ShiftInvariant) {
    const auto x = generate_frequentist({0.0, 1.0}, ContaminationSpec{300, ContaminationKind::constant_shift, 6.0, {}},
                                        1500, 4);
    const Hyperparams hp;
    const double a = estimate_variance(x, 300, hp, 9).sigma2_hat;
    const double b = estimate_variance(x.shifted(1e6), 300, hp, 9).sigma2_hat;
    EXPECT_NEAR(b / a, 1.0, 1e-9);
}

TEST(Estimate, ScaleEquivariant) {
    const Sample s = null_sample(1500, 5);
    const Hyperparams hp;
    const double a = estimate_variance(s, 50, hp, 2).sigma2_hat;
    for (double c : {0.01, 3.0, 250.0}) EXPECT_NEAR(estimate_variance(s.scaled(c), 50, hp, 2).sigma2_hat / (c * c * a), 1.0, 1e-6);
}

TEST(Estimate, PureNullParametricError) {
    const Hyperparams hp;
    const std::size_t n = 5000, trials = 100;
    std::vector<double> rel(trials);
    parallel_for(trials, [&](std::size_t t) {
        rel[t] = std::abs(estimate_variance(null_sample(n, 2000 + t, 3.0), 1, hp, t).sigma2_hat - 1.0);
    });
    EXPECT_LE(oracle::median(rel), 10.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Estimate, RejectsSmallOrUnidentifiable) {
    const Hyperparams hp;
    EXPECT_THROW(estimate_variance(null_sample(7, 6), 1, hp, 0), InvalidArgument);
    EXPECT_THROW(estimate_variance(null_sample(100, 6), 50, hp, 0), NotIdentifiable);
}

TEST(Estimate, MisScaledPilotIsDegenerate) {
    const Sample s = null_sample(1000, 7);
    EXPECT_THROW(estimate_variance_with_pilot(s, 10, 1e-6, Hyperparams{}), EcfDegenerate);
}

TEST(Cache, MatchesOneOffEstimates) {
    const Hyperparams hp;
    const auto x = generate_frequentist({0.0, 1.0}, ContaminationSpec{200, ContaminationKind::constant_shift, 5.0, {}},
                                        1200, 8);
    const double pilot = pilot_variance(x, PilotConfig::defaults(x.size(), hp, 1));
    VarianceWindowCache cache(x, pilot, hp);
    const std::vector<std::size_t> ks = {1, 10, 200, 500};
    cache.prepare(ks);
    for (std::size_t k : ks) {
        const auto a = cache.estimate(k);
        const auto b = estimate_variance_with_pilot(x, k, pilot, hp);
        EXPECT_EQ(a.sigma2_hat, b.sigma2_hat) << k;
        EXPECT_EQ(a.omega_argmin, b.omega_argmin) << k;
    }
    // Windows outside the prepared range are evaluated on demand.
    EXPECT_EQ(cache.estimate(590).sigma2_hat, estimate_variance_with_pilot(x, 590, pilot, hp).sigma2_hat);
}

TEST(SingleFrequency, SyntheticInversion) {
    // Two points at ±c give N̂(ω) = |cos ωc|; choose c with cos(c) = e^{−1/2}.
    const double c = std::acos(std::exp(-0.5));
    EXPECT_NEAR(single_frequency_variance(Sample({-c, c}), 1.0), 1.0, 1e-14);
}

TEST(SingleFrequency, NoiselessAntipodalBias) {
    const double w = 0.8;
    const std::size_t n = 1000, k = 300;
    std::vector<double> x(n, 0.0);
    for (std::size_t j = 0; j < k; ++j) x[j] = std::numbers::pi / w;
    const double expected = 2.0 / (w * w) * std::log(static_cast<double>(n) / static_cast<double>(n - 2 * k));
    EXPECT_NEAR(single_frequency_variance(Sample(x), w), expected, 1e-12);
}

TEST(SingleFrequency, PureNull) {
    const std::size_t n = 20000;
    EXPECT_NEAR(single_frequency_variance(null_sample(n, 9), 1.0), 1.0, 10.0 / std::sqrt(static_cast<double>(n)));
    EXPECT_THROW(single_frequency_variance(null_sample(10, 9), 0.0), InvalidArgument);
}

TEST(CosineSupremum, Examples) {
    EXPECT_DOUBLE_EQ(cosine_supremum(std::vector<double>(5, 0.0), 1.0, 10000), 1.0);
    const double alpha = 0.7;
    EXPECT_GT(cosine_supremum(std::vector<double>{std::numbers::pi / alpha}, alpha, 10000), 0.999);
}

TEST(CosineSupremum, NeverBelowMinusOneFifth) {
    Stream s(10);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> g(1 + s.below(20));
        for (auto& v : g) v = 100.0 * (2.0 * s.uniform() - 1.0);
        const double alpha = std::exp(6.0 * s.uniform() - 3.0);
        EXPECT_GE(cosine_supremum(g, alpha, 10000), -0.2 - 1e-3);
    }
}
