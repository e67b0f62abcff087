// dynamics.hpp — Closed-form evolution of the one-excitation atom-cavity state
//
// Basis: |E0> = |0,g>, |E1,-> and |E1,+> = (|1,g> +/- |0,e>)/sqrt(2).
// Each dressed population decays as exp(-I/2) into |E0>; the coherence
// <E1,-|rho|E1,+> decays as exp(-(I_- + I_+)/4) and rotates as exp(+2i Omega t).

#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "nmcavity/error.hpp"
#include "nmcavity/rates.hpp"
#include "nmcavity/spectral.hpp"

namespace nmcavity {

struct SystemParams {
    SpectralDensity spectrum;
    double Omega{0.5}; // JC coupling; 2*Omega is the frequency unit
    double omega0{0.0}; // atomic Bohr frequency, labeling only for observables

    double omega_minus() const { return omega0 - Omega; }
    double omega_plus() const { return omega0 + Omega; }
};

/// Density operator restricted to {|E0>, |E1,->, |E1,+>} with no E0-E1 coherences.
struct DressedDensity {
    double p0{0.0};
    double p_minus{0.0};
    double p_plus{0.0};
    std::complex<double> coh{}; // <E1,-| rho |E1,+>

    /// |0,e><0,e|: atom excited, cavity empty.
    static DressedDensity atom_excited() { return {0.0, 0.5, 0.5, {-0.5, 0.0}}; }
    static DressedDensity ground() { return {1.0, 0.0, 0.0, {}}; }

    /// Throws ValidationError(InvalidInitialState) unless this is a valid state.
    void validate(double tol = 1e-12) const {
        auto fail = [](const std::string& why) {
            throw ValidationError(ValidationKind::InvalidInitialState, why);
        };
        for (double p : {p0, p_minus, p_plus}) {
            if (!std::isfinite(p) || p < -tol || p > 1.0 + tol) fail("population outside [0, 1]");
        }
        if (!std::isfinite(coh.real()) || !std::isfinite(coh.imag())) fail("non-finite coherence");
        if (std::abs(p0 + p_minus + p_plus - 1.0) > tol) fail("populations do not sum to 1");
        if (std::norm(coh) > p_minus * p_plus + tol) fail("|coh|^2 exceeds p_minus * p_plus");
    }
};

struct Observables {
    double P_0g{0.0};
    double P_1g{0.0};
    double P_0e{0.0};
    double P_atom_excited{0.0};
};

/// Bare-basis populations, from |0,e> = (|E1,+> - |E1,->)/sqrt(2) and
/// |1,g> = (|E1,+> + |E1,->)/sqrt(2).
inline Observables observables(const DressedDensity& s) {
    const double mean = 0.5 * (s.p_minus + s.p_plus);
    Observables o;
    o.P_0g = s.p0;
    o.P_0e = mean - s.coh.real();
    o.P_1g = mean + s.coh.real();
    o.P_atom_excited = o.P_0e;
    return o;
}

/// Applies the solution map for given rate integrals. p0 is accumulated
/// with expm1 so short-time populations keep full relative precision.
inline DressedDensity evolve(const DressedDensity& init, double i_minus, double i_plus,
                             double Omega, double t) {
    const double decay_minus = std::expm1(-0.5 * i_minus); // e^{-I-/2} - 1
    const double decay_plus = std::expm1(-0.5 * i_plus);
    DressedDensity out;
    out.p_minus = init.p_minus * (1.0 + decay_minus);
    out.p_plus = init.p_plus * (1.0 + decay_plus);
    out.p0 = init.p0 - init.p_minus * decay_minus - init.p_plus * decay_plus;
    const double damping = std::exp(-0.25 * (i_minus + i_plus));
    out.coh = init.coh * damping * std::polar(1.0, 2.0 * Omega * t);
    return out;
}

inline DressedDensity analytic_state_general(const SystemParams& params, const DressedDensity& init,
                                             double t, double tol) {
    init.validate();
    const auto rates = rate_pair(params.spectrum, params.omega0, params.Omega, t, tol);
    return evolve(init, rates.i_minus, rates.i_plus, params.Omega, t);
}

/// State at time t starting from |0,e>.
inline DressedDensity analytic_state(const SystemParams& params, double t, double tol) {
    return analytic_state_general(params, DressedDensity::atom_excited(), t, tol);
}

struct TrajectorySample {
    double t{0.0};
    RatePair rates;
    DressedDensity state;
};

/// Evaluates the closed-form solution on a non-decreasing time grid,
/// accumulating I_-(t) and I_+(t) segment by segment. Output is independent
/// of `threads`.
inline std::vector<TrajectorySample> analytic_trajectory(const SystemParams& params,
                                                         const DressedDensity& init,
                                                         std::span<const double> times,
                                                         double tol, unsigned threads = 1) {
    init.validate();
    const auto i_minus = rate_integral_grid(params.spectrum, params.omega_minus(), times, tol, threads);
    const auto i_plus = rate_integral_grid(params.spectrum, params.omega_plus(), times, tol, threads);

    std::vector<TrajectorySample> out(times.size());
    bool warned = false;
    for (std::size_t k = 0; k < times.size(); ++k) {
        auto& s = out[k];
        s.t = times[k];
        s.rates.gamma_minus = gamma_closed(params.spectrum, params.omega_minus(), s.t);
        s.rates.gamma_plus = gamma_closed(params.spectrum, params.omega_plus(), s.t);
        s.rates.i_minus = i_minus[k];
        s.rates.i_plus = i_plus[k];
        if (!warned && (i_minus[k] < 0.0 || i_plus[k] < 0.0)) {
            warn_if_negative_integral(i_minus[k], "I_minus", s.t);
            warn_if_negative_integral(i_plus[k], "I_plus", s.t);
            warned = true;
        }
        s.state = evolve(init, i_minus[k], i_plus[k], params.Omega, s.t);
    }
    return out;
}

} // namespace nmcavity
