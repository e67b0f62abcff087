// propagator.hpp — RK4 integration of the time-local cavity-loss master equation
//
// Works on the full 3x3 density matrix in the dressed basis
// (|E0>, |E1,->, |E1,+>) and serves as an independent check of dynamics.hpp.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nmcavity/dynamics.hpp"
#include "nmcavity/error.hpp"
#include "nmcavity/rates.hpp"
#include "nmcavity/warning.hpp"

namespace nmcavity {

using DensityMatrix3 = Eigen::Matrix3cd;

namespace basis {
inline constexpr int kE0 = 0;
inline constexpr int kMinus = 1;
inline constexpr int kPlus = 2;
} // namespace basis

inline DensityMatrix3 to_matrix(const DressedDensity& s) {
    DensityMatrix3 rho = DensityMatrix3::Zero();
    rho(basis::kE0, basis::kE0) = s.p0;
    rho(basis::kMinus, basis::kMinus) = s.p_minus;
    rho(basis::kPlus, basis::kPlus) = s.p_plus;
    rho(basis::kMinus, basis::kPlus) = s.coh;
    rho(basis::kPlus, basis::kMinus) = std::conj(s.coh);
    return rho;
}

inline DressedDensity from_matrix(const DensityMatrix3& rho) {
    return {rho(basis::kE0, basis::kE0).real(), rho(basis::kMinus, basis::kMinus).real(),
            rho(basis::kPlus, basis::kPlus).real(), rho(basis::kMinus, basis::kPlus)};
}

/// H_JC in the dressed basis: diag(-omega0/2, omega0/2 - Omega, omega0/2 + Omega).
inline DensityMatrix3 jc_hamiltonian(double omega0, double Omega) {
    DensityMatrix3 h = DensityMatrix3::Zero();
    h(basis::kE0, basis::kE0) = -0.5 * omega0;
    h(basis::kMinus, basis::kMinus) = 0.5 * omega0 - Omega;
    h(basis::kPlus, basis::kPlus) = 0.5 * omega0 + Omega;
    return h;
}

/// drho/dt = -i[H, rho] + sum_k gamma_k (1/2 |E0><k|rho|k><E0| - 1/4 {|k><k|, rho}),
/// k over |E1,-> and |E1,+>. The 1/2 and 1/4 prefactors make each dressed
/// population decay at gamma/2.
inline DensityMatrix3 rhs(double omega0, double Omega, double gamma_minus, double gamma_plus,
                          const DensityMatrix3& rho) {
    const DensityMatrix3 h = jc_hamiltonian(omega0, Omega);
    const std::complex<double> minus_i{0.0, -1.0};
    DensityMatrix3 out = minus_i * (h * rho - rho * h);

    auto dissipate = [&](int k, double gamma) {
        DensityMatrix3 projector = DensityMatrix3::Zero();
        projector(k, k) = 1.0;
        DensityMatrix3 jump = DensityMatrix3::Zero(); // |E0><k|
        jump(basis::kE0, k) = 1.0;
        out += gamma * (0.5 * jump * rho * jump.adjoint() -
                        0.25 * (projector * rho + rho * projector));
    };
    dissipate(basis::kMinus, gamma_minus);
    dissipate(basis::kPlus, gamma_plus);
    return out;
}

inline DensityMatrix3 rhs(const SystemParams& params, double t, const DensityMatrix3& rho) {
    return rhs(params.omega0, params.Omega, gamma_closed(params.spectrum, params.omega_minus(), t),
               gamma_closed(params.spectrum, params.omega_plus(), t), rho);
}

struct SolverSettings {
    double dt{1e-3};
    double t_end{1.0};
    std::size_t record_every{1};
};

struct TrajectoryPoint {
    double t{0.0};
    DensityMatrix3 rho;
    double i_minus{0.0}; // rate integrals accumulated alongside rho
    double i_plus{0.0};
};

/// Largest admissible fixed step, 0.1 / max(lambda_max, 2 Omega, gamma_max).
inline double stability_bound(const SystemParams& params) {
    const double fastest = std::max({params.spectrum.max_width(), 2.0 * params.Omega,
                                     params.spectrum.rate_scale()});
    return 0.1 / fastest;
}

namespace detail {

inline constexpr double kTraceDriftLimit = 1e-6;
inline constexpr double kPositivityFloor = -1e-9;

inline void check_step(const SystemParams& params, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError(ValidationKind::InvalidParameter, "dt must be > 0");
    }
    const double bound = stability_bound(params);
    if (dt > bound * (1.0 + 1e-12)) {
        throw StepSizeTooLarge("dt = " + std::to_string(dt) + " exceeds stability bound " +
                               std::to_string(bound));
    }
}

inline void check_initial(const DensityMatrix3& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw ValidationError(ValidationKind::InvalidInitialState, "density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > 1e-9) {
        throw ValidationError(ValidationKind::InvalidInitialState, "trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<DensityMatrix3> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < kPositivityFloor) {
        throw ValidationError(ValidationKind::InvalidInitialState, "density matrix is not positive");
    }
}

struct StepResult {
    DensityMatrix3 rho;
    double di_minus;
    double di_plus;
};

// One RK4 step. The rate integrals ride along as dI/dt = gamma(t), which
// RK4 reduces to Simpson's rule on the same three rate evaluations.
inline StepResult rk4_step(const SystemParams& params, double t, double dt, const DensityMatrix3& rho) {
    const auto& spec = params.spectrum;
    const double wm = params.omega_minus();
    const double wp = params.omega_plus();
    const double gm[3] = {gamma_closed(spec, wm, t), gamma_closed(spec, wm, t + 0.5 * dt),
                          gamma_closed(spec, wm, t + dt)};
    const double gp[3] = {gamma_closed(spec, wp, t), gamma_closed(spec, wp, t + 0.5 * dt),
                          gamma_closed(spec, wp, t + dt)};
    auto f = [&](int node, const DensityMatrix3& r) {
        return rhs(params.omega0, params.Omega, gm[node], gp[node], r);
    };
    const DensityMatrix3 k1 = f(0, rho);
    const DensityMatrix3 k2 = f(1, rho + 0.5 * dt * k1);
    const DensityMatrix3 k3 = f(1, rho + 0.5 * dt * k2);
    const DensityMatrix3 k4 = f(2, rho + dt * k3);
    return {rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4),
            (dt / 6.0) * (gm[0] + 4.0 * gm[1] + gm[2]), (dt / 6.0) * (gp[0] + 4.0 * gp[1] + gp[2])};
}

inline void check_trace(const DensityMatrix3& rho, double t) {
    const double drift = std::abs(rho.trace() - 1.0);
    if (drift > kTraceDriftLimit) {
        throw StepSizeTooLarge("trace drift " + std::to_string(drift) + " at t = " + std::to_string(t));
    }
}

inline void monitor_positivity(const DensityMatrix3& rho, double t) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix3> eig(rho, Eigen::EigenvaluesOnly);
    const double lowest = eig.eigenvalues().minCoeff();
    if (lowest < kPositivityFloor) {
        warn("density matrix eigenvalue " + std::to_string(lowest) + " at t = " + std::to_string(t));
    }
}

} // namespace detail

/// Classical fixed-step RK4 from t = 0 to settings.t_end (rounded to a whole
/// number of steps), recording every `record_every` steps plus the initial
/// and final states.
inline std::vector<TrajectoryPoint> propagate(const SystemParams& params, const DensityMatrix3& init,
                                              const SolverSettings& settings) {
    detail::check_step(params, settings.dt);
    detail::check_initial(init);
    if (settings.record_every == 0) {
        throw ValidationError(ValidationKind::InvalidParameter, "record_every must be positive");
    }
    const auto steps = static_cast<std::size_t>(std::llround(settings.t_end / settings.dt));

    std::vector<TrajectoryPoint> out;
    out.reserve(steps / settings.record_every + 2);
    DensityMatrix3 rho = init;
    double i_minus = 0.0;
    double i_plus = 0.0;
    out.push_back({0.0, rho});
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * settings.dt;
        const auto step = detail::rk4_step(params, t, settings.dt, rho);
        rho = step.rho;
        i_minus += step.di_minus;
        i_plus += step.di_plus;
        const double t_next = static_cast<double>(n + 1) * settings.dt;
        detail::check_trace(rho, t_next);
        if ((n + 1) % settings.record_every == 0 || n + 1 == steps) {
            detail::monitor_positivity(rho, t_next);
            out.push_back({t_next, rho, i_minus, i_plus});
        }
    }
    return out;
}

/// RK4 through an arbitrary non-decreasing grid: each interval is split
/// into the fewest equal steps no longer than max_dt.
inline std::vector<TrajectoryPoint> propagate_to(const SystemParams& params, const DensityMatrix3& init,
                                                 std::span<const double> times, double max_dt) {
    detail::check_step(params, max_dt);
    detail::check_initial(init);
    std::vector<TrajectoryPoint> out;
    out.reserve(times.size());
    DensityMatrix3 rho = init;
    double i_minus = 0.0;
    double i_plus = 0.0;
    double t = 0.0;
    for (double target : times) {
        if (target < t) {
            throw ValidationError(ValidationKind::InvalidParameter, "time grid must be non-decreasing");
        }
        const double span = target - t;
        const auto steps = static_cast<std::size_t>(std::ceil(span / max_dt - 1e-9));
        const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
        for (std::size_t n = 0; n < steps; ++n) {
            const double ts = t + static_cast<double>(n) * h;
            const auto step = detail::rk4_step(params, ts, h, rho);
            rho = step.rho;
            i_minus += step.di_minus;
            i_plus += step.di_plus;
            detail::check_trace(rho, ts + h);
        }
        t = target;
        detail::monitor_positivity(rho, t);
        out.push_back({t, rho, i_minus, i_plus});
    }
    return out;
}

} // namespace nmcavity
