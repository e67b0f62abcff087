#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "nmcavity/dynamics.hpp"
#include "oracles.hpp"

using namespace nmcavity;

namespace {

SystemParams figure1() {
    return {SpectralDensity::validate(GapSpec{0.1, 100.0, 0.5, 0.099, 0.1, 0.5}), 0.5, 0.0};
}

SystemParams single_lorentzian() {
    return {SpectralDensity::validate(LorentzianSpec{0.1, 0.1, -0.5}), 0.5, 0.0};
}

double wrap_phase(double x) {
    return std::remainder(x, 2.0 * std::numbers::pi);
}

} // namespace

TEST(Dynamics, InitialStateIsAtomExcited) {
    const auto s = analytic_state(figure1(), 0.0, 1e-12);
    EXPECT_EQ(s.p0, 0.0);
    EXPECT_EQ(s.p_minus, 0.5);
    EXPECT_EQ(s.p_plus, 0.5);
    EXPECT_EQ(s.coh, std::complex<double>(-0.5, 0.0));
    const auto o = observables(s);
    EXPECT_EQ(o.P_0e, 1.0);
    EXPECT_EQ(o.P_1g, 0.0);
    EXPECT_EQ(o.P_0g, 0.0);
}

TEST(Dynamics, EvolveMatchesClosedFormExpressions) {
    const double im = 0.8;
    const double ip = 0.3;
    const double t = 2.7;
    const auto s = evolve(DressedDensity::atom_excited(), im, ip, 0.5, t);
    EXPECT_NEAR(s.p_minus, 0.5 * std::exp(-im / 2), 1e-16);
    EXPECT_NEAR(s.p_plus, 0.5 * std::exp(-ip / 2), 1e-16);
    EXPECT_NEAR(s.p0, 1.0 - 0.5 * std::exp(-im / 2) - 0.5 * std::exp(-ip / 2), 1e-16);
    const std::complex<double> coh = -0.5 * std::exp(-(im + ip) / 4) * std::polar(1.0, t);
    EXPECT_NEAR(std::abs(s.coh - coh), 0.0, 1e-16);
}

TEST(Dynamics, TrapsInUpperDressedStateWhenItsRateVanishes) {
    // I_- large, I_+ = 0: half the excitation stays in |E1,+>.
    const auto s = evolve(DressedDensity::atom_excited(), 200.0, 0.0, 0.5, 10.0);
    EXPECT_NEAR(s.p_plus, 0.5, 1e-16);
    EXPECT_NEAR(s.p0, 0.5, 1e-16);
    EXPECT_NEAR(observables(s).P_0e, 0.25, 1e-16);
}

TEST(Dynamics, TraceAndCoherenceFactorization) {
    for (const auto& params : {figure1(), single_lorentzian()}) {
        for (double t = 0.0; t <= 60.0; t += 1.3) {
            const auto s = analytic_state(params, t, 1e-12);
            EXPECT_NEAR(s.p0 + s.p_minus + s.p_plus, 1.0, 1e-12);
            EXPECT_NEAR(std::abs(s.coh), std::sqrt(s.p_minus * s.p_plus), 1e-12);
            const auto o = observables(s);
            EXPECT_NEAR(o.P_0g + o.P_1g + o.P_0e, 1.0, 1e-12);
        }
    }
}

TEST(Dynamics, CoherencePhaseAdvancesAtTwoOmega) {
    const auto params = figure1();
    for (double t = 0.1; t <= 30.0; t += 0.77) {
        const auto s = analytic_state(params, t, 1e-12);
        // coh = -|coh| e^{i 2 Omega t}
        const double phase = std::arg(-s.coh);
        EXPECT_NEAR(wrap_phase(phase - 2.0 * params.Omega * t), 0.0, 1e-9);
    }
}

TEST(Dynamics, GroundPopulationNonDecreasingForPresets) {
    for (const auto& params : {figure1(), single_lorentzian()}) {
        std::vector<double> times;
        for (int k = 0; k <= 4000; ++k) times.push_back(0.1 * k);
        const auto traj = analytic_trajectory(params, DressedDensity::atom_excited(), times, 1e-12);
        for (std::size_t k = 1; k < traj.size(); ++k) EXPECT_GE(traj[k].state.p0, traj[k - 1].state.p0);
    }
}

TEST(Dynamics, FlatSpectrumReducesToExponentialDecay) {
    const double level = 0.02;
    const double rate = 2.0 * std::numbers::pi * level;
    const SystemParams params{SpectralDensity::validate(FlatSpec{level}), 0.5, 0.0};
    for (double t = 0.0; t <= 50.0; t += 0.5) {
        const auto s = analytic_state(params, t, 1e-12);
        EXPECT_NEAR(s.p_minus, 0.5 * std::exp(-rate * t / 2), 1e-12);
        EXPECT_NEAR(s.p_plus, 0.5 * std::exp(-rate * t / 2), 1e-12);
        EXPECT_NEAR(observables(s).P_0e, 0.5 * std::exp(-rate * t / 2) * (1.0 + std::cos(t)), 1e-12);
    }
}

TEST(Dynamics, GeneralInitialStateMatchesHandFormula) {
    const auto params = single_lorentzian();
    const DressedDensity init{0.2, 0.3, 0.5, {0.1, -0.2}};
    const double t = 7.0;
    const auto s = analytic_state_general(params, init, t, 1e-12);
    const double im = static_cast<double>(oracle::lorentzian_rate_integral(0.1, 0.1, 0.0, t));
    const double ip = static_cast<double>(oracle::lorentzian_rate_integral(0.1, 0.1, -1.0, t));
    EXPECT_NEAR(s.p_minus, 0.3 * std::exp(-im / 2), 1e-12);
    EXPECT_NEAR(s.p_plus, 0.5 * std::exp(-ip / 2), 1e-12);
    EXPECT_NEAR(s.p0, 1.0 - s.p_minus - s.p_plus, 1e-12);
    const std::complex<double> coh = init.coh * std::exp(-(im + ip) / 4) * std::polar(1.0, t);
    EXPECT_NEAR(std::abs(s.coh - coh), 0.0, 1e-12);
}

TEST(Dynamics, RejectsInvalidInitialStates) {
    const auto params = figure1();
    const DressedDensity bad_trace{0.5, 0.5, 0.5, {}};
    const DressedDensity bad_coh{0.0, 0.5, 0.5, {0.6, 0.0}};
    const DressedDensity negative{1.2, -0.2, 0.0, {}};
    for (const auto& s : {bad_trace, bad_coh, negative}) {
        try {
            analytic_state_general(params, s, 1.0, 1e-12);
            FAIL() << "expected InvalidInitialState";
        } catch (const ValidationError& e) {
            EXPECT_EQ(e.kind(), ValidationKind::InvalidInitialState);
        }
    }
}

TEST(Dynamics, TrajectoryMatchesPointwiseAndIgnoresThreadCount) {
    const auto params = figure1();
    std::vector<double> times;
    for (int k = 0; k <= 400; ++k) times.push_back(k * 0.25);
    const auto one = analytic_trajectory(params, DressedDensity::atom_excited(), times, 1e-12, 1);
    const auto many = analytic_trajectory(params, DressedDensity::atom_excited(), times, 1e-12, 7);
    for (std::size_t k = 0; k < times.size(); ++k) {
        EXPECT_EQ(one[k].state.p0, many[k].state.p0);
        EXPECT_EQ(one[k].state.coh, many[k].state.coh);
        EXPECT_EQ(one[k].rates.i_plus, many[k].rates.i_plus);
    }
    for (std::size_t k = 0; k < times.size(); k += 37) {
        const auto direct = analytic_state(params, times[k], 1e-12);
        EXPECT_NEAR(one[k].state.p0, direct.p0, 1e-11);
        EXPECT_NEAR(std::abs(one[k].state.coh - direct.coh), 0.0, 1e-11);
    }
}
