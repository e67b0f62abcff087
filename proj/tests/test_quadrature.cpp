#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nmcavity/quadrature.hpp"

namespace quad = nmcavity::quad;

TEST(Quadrature, IntegratesPolynomialsExactly) {
    // Kronrod-21 is exact through degree 31.
    auto f = [](double x) { return std::pow(x, 20) - 3.0 * x * x + 1.0; };
    const auto r = quad::integrate(f, -1.0, 2.0);
    const double exact = (std::pow(2.0, 21) + 1.0) / 21.0 - (8.0 + 1.0) + 3.0;
    EXPECT_NEAR(r.value, exact, 1e-13 * exact);
}

TEST(Quadrature, OscillatoryIntegrandWithBreakpoints) {
    // int_0^{20 pi} x sin(25 x) dx = -20 pi / 25 (since cos(500 pi) = 1).
    std::vector<double> pts;
    for (int k = 0; k <= 40; ++k) pts.push_back(k * std::numbers::pi / 2.0);
    auto f = [](double x) { return x * std::sin(25.0 * x); };
    // abs_tol sits above the roundoff floor, ~50 eps int |f|
    quad::Options opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-10;
    const auto r = quad::integrate(f, pts, opts);
    EXPECT_NEAR(r.value, -20.0 * std::numbers::pi / 25.0, 1e-11);
}

TEST(Quadrature, EndpointSingularityConvergesAdaptively) {
    auto f = [](double x) { return 1.0 / std::sqrt(x); };
    quad::Options opts;
    opts.rel_tol = 1e-9;
    const auto r = quad::integrate(f, 0.0, 1.0, opts);
    EXPECT_NEAR(r.value, 2.0, 1e-8);
    EXPECT_GT(r.intervals, 1u);
}

TEST(Quadrature, ThrowsWhenSubdivisionLimitIsHit) {
    auto f = [](double x) { return std::sin(1e5 * x); };
    quad::Options opts;
    opts.rel_tol = 1e-14;
    opts.abs_tol = 1e-16;
    opts.max_subdivisions = 20;
    EXPECT_THROW(quad::integrate(f, 0.0, 100.0, opts), nmcavity::QuadratureNonConvergence);
}

TEST(Quadrature, ResultIsDeterministic) {
    auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
    const auto a = quad::integrate(f, 0.0, 30.0);
    const auto b = quad::integrate(f, 0.0, 30.0);
    EXPECT_EQ(a.value, b.value);
    EXPECT_NEAR(a.value, 1.0 / 50.0, 1e-12);
}
