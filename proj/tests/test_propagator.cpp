#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nmcavity/propagator.hpp"

using namespace nmcavity;

namespace {

SystemParams figure1() {
    return {SpectralDensity::validate(GapSpec{0.1, 100.0, 0.5, 0.099, 0.1, 0.5}), 0.5, 0.0};
}

SystemParams single_lorentzian() {
    return {SpectralDensity::validate(LorentzianSpec{0.1, 0.1, -0.5}), 0.5, 0.0};
}

double max_element_error(const DensityMatrix3& a, const DensityMatrix3& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

DressedDensity random_state(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = u(rng), b = u(rng), c = u(rng);
    const double sum = a + b + c;
    DressedDensity s{a / sum, b / sum, c / sum, {}};
    const double r = std::sqrt(s.p_minus * s.p_plus) * u(rng);
    s.coh = std::polar(r, 2.0 * 3.141592653589793 * u(rng));
    return s;
}

} // namespace

TEST(Rhs, PopulationDecayAndCoherenceRotation) {
    // rho = |E1,->: dp-/dt = -gamma_-/2, dp0/dt = +gamma_-/2.
    const DensityMatrix3 rho = to_matrix({0.0, 1.0, 0.0, {}});
    const auto d = rhs(0.0, 0.5, 0.2, 0.05, rho);
    EXPECT_NEAR(d(basis::kMinus, basis::kMinus).real(), -0.1, 1e-16);
    EXPECT_NEAR(d(basis::kE0, basis::kE0).real(), 0.1, 1e-16);
    EXPECT_NEAR(d(basis::kPlus, basis::kPlus).real(), 0.0, 1e-16);

    // coherence: d coh/dt = (+2i Omega - (gamma_- + gamma_+)/4) coh
    const DensityMatrix3 c = to_matrix({0.0, 0.5, 0.5, {-0.5, 0.0}});
    const auto dc = rhs(0.3, 0.5, 0.2, 0.04, c);
    const std::complex<double> expected = std::complex<double>(-0.06, 1.0) * std::complex<double>(-0.5, 0.0);
    EXPECT_NEAR(std::abs(dc(basis::kMinus, basis::kPlus) - expected), 0.0, 1e-16);
}

TEST(Rhs, TraceFreeHermitianAndBlockDiagonal) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const DensityMatrix3 rho = to_matrix(random_state(rng));
        const auto d = rhs(g(rng), 0.5, g(rng), g(rng), rho);
        EXPECT_NEAR(std::abs(d.trace()), 0.0, 1e-15);
        EXPECT_LT(max_element_error(d, d.adjoint()), 1e-15);
        EXPECT_EQ(d(basis::kE0, basis::kMinus), std::complex<double>(0.0));
        EXPECT_EQ(d(basis::kE0, basis::kPlus), std::complex<double>(0.0));
    }
}

TEST(Propagator, MatchesAnalyticForRandomInitialStates) {
    std::mt19937_64 rng(43);
    std::vector<double> times;
    for (int k = 1; k <= 10; ++k) times.push_back(2.0 * k);
    for (const auto& params : {figure1(), single_lorentzian()}) {
        for (int i = 0; i < 10; ++i) {
            const auto init = random_state(rng);
            const auto traj = propagate_to(params, to_matrix(init), times, 1e-3);
            for (const auto& p : traj) {
                const auto exact = to_matrix(analytic_state_general(params, init, p.t, 1e-13));
                EXPECT_LT(max_element_error(p.rho, exact), 1e-8) << "t=" << p.t;
            }
        }
    }
}

TEST(Propagator, AccumulatedIntegralsMatchQuadrature) {
    const auto params = figure1();
    SolverSettings settings;
    settings.dt = 1e-3;
    settings.t_end = 20.0;
    settings.record_every = 5000;
    const auto traj = propagate(params, to_matrix(DressedDensity::atom_excited()), settings);
    ASSERT_EQ(traj.size(), 5u);
    EXPECT_DOUBLE_EQ(traj.back().t, 20.0);
    EXPECT_NEAR(traj.back().i_minus, rate_integral(params.spectrum, -0.5, 20.0, 1e-13), 1e-10);
    EXPECT_NEAR(traj.back().i_plus, rate_integral(params.spectrum, 0.5, 20.0, 1e-13), 1e-10);
}

TEST(Propagator, FourthOrderConvergence) {
    // Single Lorentzian with a width that makes the step error visible.
    const SystemParams params{SpectralDensity::validate(LorentzianSpec{0.5, 2.0, -0.5}), 0.5, 0.0};
    const auto init = DressedDensity::atom_excited();
    const std::vector<double> times{5.0};
    const auto exact = to_matrix(analytic_state_general(params, init, 5.0, 1e-12));
    const double e1 = max_element_error(propagate_to(params, to_matrix(init), times, 0.04).back().rho, exact);
    const double e2 = max_element_error(propagate_to(params, to_matrix(init), times, 0.02).back().rho, exact);
    EXPECT_GE(e1 / e2, 12.0);
    EXPECT_LE(e1 / e2, 20.0);
}

TEST(Propagator, RejectsStepAboveStabilityBound) {
    const auto params = figure1();
    EXPECT_DOUBLE_EQ(stability_bound(params), 1e-3);
    SolverSettings settings;
    settings.dt = 2e-3;
    EXPECT_THROW(propagate(params, to_matrix(DressedDensity::atom_excited()), settings), StepSizeTooLarge);
    EXPECT_THROW(propagate_to(params, to_matrix(DressedDensity::atom_excited()), std::vector<double>{1.0}, 2e-3),
                 StepSizeTooLarge);
}

TEST(Propagator, RejectsNonPhysicalInitialMatrix) {
    DensityMatrix3 rho = to_matrix(DressedDensity::atom_excited());
    rho(0, 1) = 0.3;
    try {
        propagate(single_lorentzian(), rho, SolverSettings{});
        FAIL() << "expected InvalidInitialState";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.kind(), ValidationKind::InvalidInitialState);
    }
}

TEST(Propagator, TracePreserved) {
    const auto params = single_lorentzian();
    SolverSettings settings;
    settings.dt = 1e-2;
    settings.t_end = 50.0;
    settings.record_every = 100;
    for (const auto& p : propagate(params, to_matrix(DressedDensity::atom_excited()), settings)) {
        EXPECT_NEAR(std::abs(p.rho.trace() - 1.0), 0.0, 1e-9);
    }
}
