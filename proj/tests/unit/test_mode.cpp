#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nullest/mode.hpp"
#include "nullest/parallel.hpp"
#include "nullest/rng.hpp"
#include "nullest/sim.hpp"
#include "oracles.hpp"

using namespace nullest;

TEST(KernelMode, Examples) {
    const auto m = kernel_mode(Sample({0.0, 0.0, 0.0, 5.0}), 1.0);
    EXPECT_EQ(m.theta_hat, 0.0);
    EXPECT_EQ(m.max_count, 3u);
    EXPECT_EQ(m.h_used, 1.0);
    EXPECT_EQ(kernel_mode(Sample({-2.25}), 0.1).theta_hat, -2.25);
    EXPECT_THROW(kernel_mode(Sample({1.0}), 0.0), InvalidArgument);
}

TEST(KernelMode, ClosedWindowAndLeftmostTie) {
    // {0, 2} fit in a closed window of half-width 1; the two clusters tie.
    const auto m = kernel_mode(Sample({0.0, 2.0, 10.0, 12.0}), 1.0);
    EXPECT_EQ(m.max_count, 2u);
    EXPECT_EQ(m.theta_hat, 1.0);
}

TEST(KernelMode, MatchesDenseGridOracle) {
    Stream s(1);
    for (int i = 0; i < 500; ++i) {
        std::vector<double> x(1 + s.below(12));
        for (auto& v : x) v = std::round(40.0 * s.uniform()) / 4.0;
        // h off the data lattice, so every maximiser set has positive length.
        const double h = 0.1 + std::round(8.0 * s.uniform()) / 4.0;
        const auto m = kernel_mode(Sample(x), h);
        const auto ref = oracle::dense_grid_mode(x, h, 20001);
        EXPECT_EQ(m.max_count, ref.count) << i;
        EXPECT_EQ(oracle::window_count(x, m.theta_hat, h), m.max_count) << i;
    }
}

TEST(KernelMode, ShiftEquivariantExactly) {
    Stream s(2);
    std::vector<double> x(200);
    for (auto& v : x) v = std::round(64.0 * s.normal()) / 16.0;
    const Sample sample(x);
    const auto base = kernel_mode(sample, 0.5);
    for (double c : {-1024.0, 3.5, 65536.0}) {
        const auto m = kernel_mode(sample.shifted(c), 0.5);
        EXPECT_EQ(m.theta_hat, base.theta_hat + c);
        EXPECT_EQ(m.max_count, base.max_count);
    }
}

TEST(KernelMode, CountsTheCluster) {
    std::vector<double> x(60, 3.0);
    for (std::size_t j = 0; j < 30; ++j) x[j] = 3.0 + (j % 2 ? 10.0 : -10.0) + 0.001 * static_cast<double>(j);
    EXPECT_EQ(kernel_mode(Sample(x), 0.5).max_count, 30u);
    EXPECT_EQ(kernel_mode(Sample(x), 0.5).theta_hat, 3.0);
}

TEST(Bandwidth, Examples) {
    Hyperparams hp;
    EXPECT_EQ(mode_bandwidth(10, 10000, hp), 1.0);
    EXPECT_NEAR(mode_bandwidth(4990, 10000, hp), std::sqrt(std::log(25.0)), 1e-14);
    double prev = 0.0;
    for (std::size_t k = 4999; k > 4800; --k) {
        const double h = mode_bandwidth(k, 10000, hp);
        if (prev > 0.0) {
            EXPECT_LE(h, prev);
        }
        prev = h;
    }
    EXPECT_THROW(mode_bandwidth(5000, 10000, hp), NotIdentifiable);
}

TEST(Median, LowerMedian) {
    EXPECT_EQ(sample_median(Sample({3.0, 1.0, 2.0})), 2.0);
    EXPECT_EQ(sample_median(Sample({4.0, 1.0, 3.0, 2.0})), 2.0);
    EXPECT_EQ(sample_median(Sample({7.0})), 7.0);
}

TEST(Median, HuberRate) {
    const std::size_t n = 5000, k = 750, trials = 200;
    std::vector<double> err(trials);
    parallel_for(trials, [&](std::size_t t) {
        const Sample x = generate_frequentist({0.0, 1.0}, ContaminationSpec{k, ContaminationKind::constant_shift, 50.0, {}},
                                              n, hash_key({200, t}));
        err[t] = std::abs(sample_median(x));
    });
    const double nd = static_cast<double>(n), kd = static_cast<double>(k);
    EXPECT_LE(oracle::median(err), 2.0 * std::sqrt(1.0 / nd + kd * kd / (nd * nd)));
}
