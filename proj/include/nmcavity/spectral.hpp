// spectral.hpp — Reservoir spectral densities J(omega) and their validation
//
// Frequencies are dimensionless, measured in units of the doubled Rabi
// coupling 2*Omega. J(omega) lives on the whole real line.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "nmcavity/error.hpp"

namespace nmcavity {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Flat (white) reservoir, J(omega) = level. Markovian reference model.
struct FlatSpec {
    double level{0.0};
};

/// J(omega) = alpha*lambda^2 / (2*pi*((omega1 - omega)^2 + lambda^2)).
struct LorentzianSpec {
    double coupling_alpha{0.0};
    double width_lambda{1.0};
    double center_omega1{0.0};
};

/// Lorentzian background (alpha1, lambda1, omega1) minus a narrower
/// Lorentzian (alpha2, lambda2, omega2) that carves out a gap.
struct GapSpec {
    double alpha1{0.0};
    double lambda1{1.0};
    double omega1{0.0};
    double alpha2{0.0};
    double lambda2{1.0};
    double omega2{0.0};

    LorentzianSpec background() const { return {alpha1, lambda1, omega1}; }
    LorentzianSpec notch() const { return {alpha2, lambda2, omega2}; }
};

using SpectrumModel = std::variant<FlatSpec, LorentzianSpec, GapSpec>;

inline double evaluate(const FlatSpec& spec, double /*omega*/) { return spec.level; }

inline double evaluate(const LorentzianSpec& spec, double omega) {
    const double detuning = spec.center_omega1 - omega;
    const double l2 = spec.width_lambda * spec.width_lambda;
    return spec.coupling_alpha * l2 / (kTwoPi * (detuning * detuning + l2));
}

inline double evaluate(const GapSpec& spec, double omega) {
    return evaluate(spec.background(), omega) - evaluate(spec.notch(), omega);
}

inline double evaluate(const SpectrumModel& model, double omega) {
    return std::visit([omega](const auto& s) { return evaluate(s, omega); }, model);
}

namespace detail {

inline void check_lorentzian(const LorentzianSpec& s, const char* label) {
    if (!(s.width_lambda > 0.0) || !std::isfinite(s.width_lambda)) {
        throw ValidationError(ValidationKind::NonPositiveWidth,
                              std::string(label) + " = " + std::to_string(s.width_lambda));
    }
    if (!(s.coupling_alpha >= 0.0) || !std::isfinite(s.coupling_alpha)) {
        throw ValidationError(ValidationKind::NegativeCoupling,
                              std::string(label) + " coupling = " +
                                  std::to_string(s.coupling_alpha));
    }
    if (!std::isfinite(s.center_omega1)) {
        throw ValidationError(ValidationKind::InvalidParameter, "non-finite center frequency");
    }
}

// Grid scan over [min(w1,w2) - 10*lambda1, max(w1,w2) + 10*lambda1]. The
// centers are always sampled and every grid-local minimum is refined, so a
// gap narrower than the grid spacing cannot slip through.
inline void check_gap_positivity(const GapSpec& s) {
    constexpr int kSamples = 10000;
    const double lo = std::min(s.omega1, s.omega2) - 10.0 * s.lambda1;
    const double hi = std::max(s.omega1, s.omega2) + 10.0 * s.lambda1;
    const double step = (hi - lo) / (kSamples - 1);
    auto J = [&](double w) { return evaluate(s, w); };

    auto reject_if_negative = [&](double w) {
        const double v = J(w);
        if (v < 0.0) throw NegativeSpectralDensity(w, v);
    };
    reject_if_negative(s.omega1);
    reject_if_negative(s.omega2);

    std::vector<double> values(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        const double w = lo + step * i;
        values[i] = J(w);
        if (values[i] < 0.0) throw NegativeSpectralDensity(w, values[i]);
    }
    for (int i = 1; i + 1 < kSamples; ++i) {
        if (values[i] <= values[i - 1] && values[i] <= values[i + 1]) {
            const auto [w, v] = boost::math::tools::brent_find_minima(
                J, lo + step * (i - 1), lo + step * (i + 1), 52);
            if (v < 0.0) throw NegativeSpectralDensity(w, v);
        }
    }
}

} // namespace detail

/// A spectral density whose parameters passed validation. Immutable.
class SpectralDensity {
public:
    /// Throws ValidationError (NonPositiveWidth, NegativeCoupling,
    /// NegativeSpectralDensity or InvalidParameter) on bad input.
    static SpectralDensity validate(SpectrumModel model) {
        std::visit([](const auto& s) { check(s); }, model);
        return SpectralDensity(std::move(model));
    }

    double operator()(double omega) const { return evaluate(model_, omega); }

    const SpectrumModel& model() const noexcept { return model_; }

    template <class T>
    const T* get_if() const noexcept {
        return std::get_if<T>(&model_);
    }

    /// Largest Lorentzian width present (0 for a flat spectrum).
    double max_width() const {
        if (auto* l = get_if<LorentzianSpec>()) return l->width_lambda;
        if (auto* g = get_if<GapSpec>()) return std::max(g->lambda1, g->lambda2);
        return 0.0;
    }

    /// Smallest Lorentzian width present (0 for a flat spectrum).
    double min_width() const {
        if (auto* l = get_if<LorentzianSpec>()) return l->width_lambda;
        if (auto* g = get_if<GapSpec>()) return std::min(g->lambda1, g->lambda2);
        return 0.0;
    }

    /// Scale of the decay rates this spectrum can produce: 2*pi times the
    /// largest single-term peak of J.
    double rate_scale() const {
        if (auto* f = get_if<FlatSpec>()) return kTwoPi * f->level;
        if (auto* l = get_if<LorentzianSpec>()) return l->coupling_alpha;
        const auto* g = get_if<GapSpec>();
        return std::max(g->alpha1, g->alpha2);
    }

    /// Centers and widths of the Lorentzian terms, for quadrature breakpoints.
    std::vector<std::pair<double, double>> features() const {
        if (auto* l = get_if<LorentzianSpec>()) return {{l->center_omega1, l->width_lambda}};
        if (auto* g = get_if<GapSpec>()) return {{g->omega1, g->lambda1}, {g->omega2, g->lambda2}};
        return {};
    }

private:
    explicit SpectralDensity(SpectrumModel model) : model_(std::move(model)) {}

    static void check(const FlatSpec& s) {
        if (!(s.level >= 0.0) || !std::isfinite(s.level)) {
            throw ValidationError(ValidationKind::NegativeSpectralDensity,
                                  "flat level = " + std::to_string(s.level));
        }
    }

    static void check(const LorentzianSpec& s) { detail::check_lorentzian(s, "lambda"); }

    static void check(const GapSpec& s) {
        detail::check_lorentzian(s.background(), "lambda1");
        detail::check_lorentzian(s.notch(), "lambda2");
        detail::check_gap_positivity(s);
        if (!(s.lambda1 > s.lambda2)) {
            throw ValidationError(ValidationKind::InvalidParameter,
                                  "gap spectrum needs lambda1 > lambda2");
        }
        if (!(s.alpha1 > s.alpha2)) {
            throw ValidationError(ValidationKind::InvalidParameter,
                                  "gap spectrum needs alpha1 > alpha2");
        }
    }

    SpectrumModel model_;
};

} // namespace nmcavity
