// rates.hpp — Time-dependent decay rates gamma(omega, t) of the cavity-loss channel
//
// Closed forms for Lorentzian and gap spectra, an independent quadrature of
// the sinc-kernel integral for any spectrum, the (diagnostic-only) transient
// Lamb shift, stationary limits and running rate integrals I(t).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nmcavity/error.hpp"
#include "nmcavity/parallel.hpp"
#include "nmcavity/quadrature.hpp"
#include "nmcavity/spectral.hpp"
#include "nmcavity/warning.hpp"

namespace nmcavity {

/// Decay rates of the two dressed states and their running integrals.
struct RatePair {
    double gamma_minus{0.0}; // gamma(omega0 - Omega, t)
    double gamma_plus{0.0};  // gamma(omega0 + Omega, t)
    double i_minus{0.0};     // int_0^t gamma_minus
    double i_plus{0.0};      // int_0^t gamma_plus
};

namespace detail {

inline void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError(ValidationKind::InvalidParameter,
                              "time must be finite and >= 0, got " + std::to_string(t));
    }
}

inline void require_tol(double tol) {
    if (!(tol > 0.0)) {
        throw ValidationError(ValidationKind::InvalidParameter,
                              "tolerance must be > 0, got " + std::to_string(tol));
    }
}

// t - (1 - exp(-lambda t)) / lambda, without cancellation for small lambda*t.
inline double ramp_integral(double lambda, double t) {
    const double x = lambda * t;
    if (x < 1e-3) {
        // t * (x/2 - x^2/6 + x^3/24 - x^4/120)
        return t * x * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 24.0 - x / 120.0)));
    }
    return t + std::expm1(-x) / lambda;
}

// pi/2 - Si(u) for u >= 100, from the asymptotic auxiliary functions.
inline double sine_integral_complement(double u) {
    const double r = 1.0 / (u * u);
    const double f = (1.0 - r * (2.0 - r * (24.0 - r * (720.0 - r * 40320.0)))) / u;
    const double g = r * (1.0 - r * (6.0 - r * (120.0 - r * (5040.0 - r * 362880.0))));
    return f * std::cos(u) + g * std::sin(u);
}

// int_u^inf sin(v) / v^3 dv for u >= 100, by parts down to pi/2 - Si(u).
inline double sine_cube_tail(double u) {
    return std::sin(u) / (2.0 * u * u) + std::cos(u) / (2.0 * u) - 0.5 * sine_integral_complement(u);
}

// Half-width of the frequency window kept by the sinc-kernel quadratures.
inline double frequency_cutoff(const SpectralDensity& spec, double omega, double t) {
    double cutoff = std::max(50.0 * spec.max_width(), 100.0 / t);
    for (const auto& [center, width] : spec.features()) {
        cutoff = std::max(cutoff, std::abs(center - omega) + 50.0 * width);
    }
    return cutoff;
}

// Partition of [0, cutoff] in the folded variable x = |omega' - omega|:
// refined around every Lorentzian feature and no coarser than one period
// of the kernel oscillation.
inline std::vector<double> frequency_breakpoints(const SpectralDensity& spec, double omega,
                                                 double t, double cutoff,
                                                 std::size_t max_segments) {
    std::vector<double> pts{0.0, cutoff};
    for (const auto& [center, width] : spec.features()) {
        const double x0 = std::abs(center - omega);
        for (double m : {-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0}) {
            const double x = x0 + m * width;
            if (x > 0.0 && x < cutoff) pts.push_back(x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const double period = kTwoPi / t;
    const double estimate = cutoff / period + static_cast<double>(pts.size());
    if (estimate > static_cast<double>(max_segments) / 2) {
        throw QuadratureNonConvergence(
            "kernel oscillates ~" + std::to_string(static_cast<long long>(cutoff / period)) +
            " times over the frequency window; reduce t or the spectral widths");
    }
    std::vector<double> out;
    out.push_back(pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double a = pts[i - 1];
        const double b = pts[i];
        const auto pieces = static_cast<std::size_t>(std::ceil((b - a) / period));
        for (std::size_t k = 1; k < pieces; ++k) {
            out.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
        }
        out.push_back(b);
    }
    return out;
}

// Partition of [t0, t1] for integrating a closed-form rate in time.
inline std::vector<double> time_breakpoints(const SpectralDensity& spec, double omega,
                                            double t0, double t1) {
    std::vector<double> pts{t0, t1};
    auto add = [&](double s) {
        if (s > t0 && s < t1) pts.push_back(s);
    };
    constexpr std::size_t kMaxOscillationPieces = 2000;
    for (const auto& [center, width] : spec.features()) {
        for (double k : {0.1, 1.0, 3.0, 10.0, 30.0}) add(k / width);
        const double detuning = std::abs(center - omega);
        if (detuning > 0.0) {
            const double horizon = std::min(t1, 30.0 / width);
            const double half_period = std::numbers::pi / detuning;
            const auto n = std::min(kMaxOscillationPieces,
                                    static_cast<std::size_t>(std::ceil(horizon / half_period)));
            for (std::size_t j = 1; j < n; ++j) add(horizon * static_cast<double>(j) / n);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

} // namespace detail

/// gamma(omega, t) for a single Lorentzian peak:
/// A * {1 + [(d/lambda) sin(d t) - cos(d t)] e^{-lambda t}},  d = omega1 - omega,
/// A = alpha lambda^2 / (d^2 + lambda^2).
inline double gamma_closed_lorentzian(const LorentzianSpec& spec, double omega, double t) {
    detail::require_time(t);
    const double d = spec.center_omega1 - omega;
    const double lambda = spec.width_lambda;
    const double amplitude = spec.coupling_alpha * lambda * lambda / (d * d + lambda * lambda);
    const double transient = ((d / lambda) * std::sin(d * t) - std::cos(d * t)) * std::exp(-lambda * t);
    return amplitude * (1.0 + transient);
}

inline double gamma_closed_gap(const GapSpec& spec, double omega, double t) {
    return gamma_closed_lorentzian(spec.background(), omega, t) -
           gamma_closed_lorentzian(spec.notch(), omega, t);
}

/// White reservoir: the rate switches on to 2*pi*J0 immediately after t = 0.
inline double gamma_closed_flat(const FlatSpec& spec, double /*omega*/, double t) {
    detail::require_time(t);
    return t > 0.0 ? kTwoPi * spec.level : 0.0;
}

inline double gamma_closed(const SpectralDensity& spec, double omega, double t) {
    if (auto* l = spec.get_if<LorentzianSpec>()) return gamma_closed_lorentzian(*l, omega, t);
    if (auto* g = spec.get_if<GapSpec>()) return gamma_closed_gap(*g, omega, t);
    return gamma_closed_flat(*spec.get_if<FlatSpec>(), omega, t);
}

/// Markovian (t -> infinity) rate, 2*pi*J(omega).
inline double stationary_rate(const SpectralDensity& spec, double omega) {
    return kTwoPi * spec(omega);
}

/// 2 * int J(w') sin((w' - omega) t) / (w' - omega) dw' by adaptive quadrature.
///
/// The integral is folded about w' = omega, where the kernel tends to t, and
/// truncated at |w' - omega| = max(50 lambda_max, 100/t) (widened to cover
/// every peak). Past the cutoff the folded spectrum is continued as its edge
/// value for a flat spectrum and as edge * (cutoff/x)^2 for Lorentzian
/// families, whose tails decay that way; both continuations integrate in
/// closed form against the sinc kernel. Does not use the residue evaluation
/// behind the closed forms.
inline double gamma_numeric(const SpectralDensity& spec, double omega, double t, double tol,
                            std::size_t max_subdivisions = 10000) {
    detail::require_time(t);
    detail::require_tol(tol);
    if (t == 0.0) return 0.0;

    const double cutoff = detail::frequency_cutoff(spec, omega, t);
    auto folded = [&](double x) { return spec(omega + x) + spec(omega - x); };
    auto integrand = [&](double x) {
        const double u = x * t;
        const double kernel = std::abs(u) < 1e-4 ? t * (1.0 - u * u / 6.0) : std::sin(u) / x;
        return folded(x) * kernel;
    };

    const auto pts = detail::frequency_breakpoints(spec, omega, t, cutoff, max_subdivisions);
    quad::Options opts;
    opts.rel_tol = tol;
    opts.abs_tol = 1e-3 * tol * spec.rate_scale();
    opts.max_subdivisions = max_subdivisions;
    const auto body = quad::integrate(integrand, std::span<const double>(pts), opts);
    const double u = cutoff * t;
    const double tail = spec.get_if<FlatSpec>() ? folded(cutoff) * detail::sine_integral_complement(u)
                                                : folded(cutoff) * u * u * detail::sine_cube_tail(u);
    return 2.0 * (body.value + tail);
}

/// Principal-value integral int J(w') (1 - cos((w' - omega) t)) / (w' - omega) dw',
/// the transient Lamb shift. Reported for diagnostics only; the dynamics
/// never uses it. Same window as gamma_numeric; the odd part of J about
/// omega decays as x^-3 past the cutoff and that tail is added in closed form.
inline double lamb_shift_numeric(const SpectralDensity& spec, double omega, double t, double tol,
                                 std::size_t max_subdivisions = 10000) {
    detail::require_time(t);
    detail::require_tol(tol);
    if (t == 0.0) return 0.0;

    const double cutoff = detail::frequency_cutoff(spec, omega, t);
    auto integrand = [&](double x) {
        const double odd = spec(omega + x) - spec(omega - x);
        const double u = x * t;
        if (std::abs(u) < 1e-4) return odd * x * t * t * 0.5;
        const double s = std::sin(0.5 * u);
        return odd * 2.0 * s * s / x;
    };
    const auto pts = detail::frequency_breakpoints(spec, omega, t, cutoff, max_subdivisions);
    quad::Options opts;
    opts.rel_tol = tol;
    opts.abs_tol = 1e-3 * tol * spec.rate_scale();
    opts.max_subdivisions = max_subdivisions;
    const double body = quad::integrate(integrand, std::span<const double>(pts), opts).value;
    // odd(x) ~ odd(L) (L/x)^3: int_L^inf (1 - cos xt) / x^4 dx times odd(L) L^3
    const double u = cutoff * t;
    const double edge = spec(omega + cutoff) - spec(omega - cutoff);
    return body + edge * (1.0 - std::cos(u) + u * u * u * detail::sine_cube_tail(u)) / 3.0;
}

/// int_{t0}^{t1} gamma(omega, s) ds. Flat spectra and the resonant Lorentzian
/// are integrated analytically; everything else by adaptive quadrature of
/// the closed-form rate.
inline double rate_integral(const SpectralDensity& spec, double omega, double t0, double t1,
                            double tol) {
    detail::require_time(t0);
    detail::require_time(t1);
    detail::require_tol(tol);
    if (t1 < t0) {
        throw ValidationError(ValidationKind::InvalidParameter, "rate_integral needs t0 <= t1");
    }
    if (t1 == t0) return 0.0;

    if (auto* f = spec.get_if<FlatSpec>()) return kTwoPi * f->level * (t1 - t0);
    if (auto* l = spec.get_if<LorentzianSpec>(); l && l->center_omega1 == omega) {
        return l->coupling_alpha *
               (detail::ramp_integral(l->width_lambda, t1) - detail::ramp_integral(l->width_lambda, t0));
    }

    const auto pts = detail::time_breakpoints(spec, omega, t0, t1);
    quad::Options opts;
    opts.rel_tol = tol;
    opts.abs_tol = 1e-4 * tol * spec.rate_scale() * (t1 - t0);
    auto rate = [&](double s) { return gamma_closed(spec, omega, s); };
    return quad::integrate(rate, std::span<const double>(pts), opts).value;
}

inline double rate_integral(const SpectralDensity& spec, double omega, double t, double tol) {
    return rate_integral(spec, omega, 0.0, t, tol);
}

/// I(t_k) on a non-decreasing grid. Each increment I(t_{k+1}) - I(t_k) is an
/// independent integral (computed on up to `threads` threads); the running
/// sum is then accumulated in grid order, so the result is bit-identical for
/// every thread count.
inline std::vector<double> rate_integral_grid(const SpectralDensity& spec, double omega,
                                              std::span<const double> times, double tol,
                                              unsigned threads = 1) {
    std::vector<double> increments(times.size());
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (times[k] < times[k - 1]) {
            throw ValidationError(ValidationKind::InvalidParameter, "time grid must be non-decreasing");
        }
    }
    detail::parallel_for(times.size(), threads, [&](std::size_t k) {
        const double start = k == 0 ? 0.0 : times[k - 1];
        increments[k] = rate_integral(spec, omega, start, times[k], tol);
    });
    std::vector<double> out(times.size());
    double running = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        running += increments[k];
        out[k] = running;
    }
    return out;
}

inline void warn_if_negative_integral(double value, const char* label, double t) {
    if (value < 0.0) {
        warn(std::string(label) + "(t=" + std::to_string(t) + ") = " + std::to_string(value) +
             " is negative");
    }
}

/// Rates and rate integrals at the dressed Bohr frequencies omega0 -/+ Omega.
inline RatePair rate_pair(const SpectralDensity& spec, double omega0, double Omega, double t,
                          double tol) {
    const double w_minus = omega0 - Omega;
    const double w_plus = omega0 + Omega;
    RatePair out;
    out.gamma_minus = gamma_closed(spec, w_minus, t);
    out.gamma_plus = gamma_closed(spec, w_plus, t);
    out.i_minus = rate_integral(spec, w_minus, t, tol);
    out.i_plus = rate_integral(spec, w_plus, t, tol);
    warn_if_negative_integral(out.i_minus, "I_minus", t);
    warn_if_negative_integral(out.i_plus, "I_plus", t);
    return out;
}

} // namespace nmcavity
