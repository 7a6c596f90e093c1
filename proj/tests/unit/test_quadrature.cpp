#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nullest/quadrature.hpp"
#include "nullest/types.hpp"

using namespace nullest;

TEST(Simpson, SmoothIntegrals) {
    EXPECT_NEAR(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12), 2.0, 1e-11);
    EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12), std::sqrt(std::numbers::pi),
                1e-11);
    EXPECT_EQ(adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0, 1e-9), 0.0);
}

TEST(Simpson, OscillatoryIntegrand) {
    const double w = 40.0;
    const double ref = (1.0 - std::cos(w)) / w;
    EXPECT_NEAR(adaptive_simpson([w](double x) { return std::sin(w * x); }, 0.0, 1.0, 1e-12), ref, 1e-11);
}

TEST(Simpson, NonConvergenceIsReported) {
    EXPECT_THROW(adaptive_simpson([](double x) { return std::sin(1.0 / (x + 1e-9)); }, 0.0, 1.0, 1e-14, 3),
                 QuadratureError);
    EXPECT_THROW(adaptive_simpson([](double x) { return x; }, 0.0, 1.0, 0.0), InvalidArgument);
}

TEST(GaussLegendre, ExactForPolynomials) {
    EXPECT_NEAR(gauss_legendre([](double x) { return std::pow(x, 29); }, 0.0, 1.0, 1), 1.0 / 30.0, 1e-15);
    EXPECT_NEAR(gauss_legendre([](double x) { return 3.0 * x * x; }, -1.0, 2.0, 4), 9.0, 1e-13);
    EXPECT_THROW(gauss_legendre([](double x) { return x; }, 0.0, 1.0, 0), InvalidArgument);
}

TEST(GaussLegendre, PiecewiseHandlesKinks) {
    const auto f = [](double x) { return std::abs(x); };
    EXPECT_NEAR(gauss_legendre_piecewise(f, {-1.0, 0.0, 2.0}, 0.5), 2.5, 1e-14);
    EXPECT_THROW(gauss_legendre_piecewise(f, {0.0}, 1.0), InvalidArgument);
    EXPECT_THROW(gauss_legendre_piecewise(f, {1.0, 0.0}, 1.0), InvalidArgument);
}
