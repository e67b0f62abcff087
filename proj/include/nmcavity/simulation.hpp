// simulation.hpp — Config-driven runs, sweeps and rate tables with CSV output

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nmcavity/config.hpp"
#include "nmcavity/dynamics.hpp"
#include "nmcavity/error.hpp"
#include "nmcavity/parallel.hpp"
#include "nmcavity/propagator.hpp"
#include "nmcavity/rates.hpp"

namespace nmcavity {

struct IoError : Error {
    using Error::Error;
};

struct TimeSeriesRow {
    double t{0.0};
    double gamma_minus{0.0};
    double gamma_plus{0.0};
    double I_minus{0.0};
    double I_plus{0.0};
    double p_E0{0.0};
    double p_Eminus{0.0};
    double p_Eplus{0.0};
    double coh_re{0.0};
    double coh_im{0.0};
    double P_0g{0.0};
    double P_1g{0.0};
    double P_0e{0.0};

    /// Values in kColumns order.
    std::array<double, kColumns.size()> values() const {
        return {t, gamma_minus, gamma_plus, I_minus, I_plus, p_E0, p_Eminus,
                p_Eplus, coh_re, coh_im, P_0g, P_1g, P_0e};
    }
};

inline TimeSeriesRow make_row(double t, const RatePair& rates, const DressedDensity& state) {
    const auto obs = observables(state);
    return {t,
            rates.gamma_minus,
            rates.gamma_plus,
            rates.i_minus,
            rates.i_plus,
            state.p0,
            state.p_minus,
            state.p_plus,
            state.coh.real(),
            state.coh.imag(),
            obs.P_0g,
            obs.P_1g,
            obs.P_0e};
}

/// Runs one engine (Analytic or Rk4) over the configured time grid.
inline std::vector<TimeSeriesRow> simulate(const SimConfig& cfg, Engine engine) {
    const auto params = build_system(cfg);
    const auto init = resolve_initial_state(cfg);
    const auto times = time_grid(cfg.time);

    std::vector<TimeSeriesRow> rows;
    rows.reserve(times.size());
    if (engine == Engine::Rk4) {
        const auto traj = propagate_to(params, to_matrix(init), times, cfg.dt);
        for (const auto& p : traj) {
            RatePair rates{gamma_closed(params.spectrum, params.omega_minus(), p.t),
                           gamma_closed(params.spectrum, params.omega_plus(), p.t), p.i_minus, p.i_plus};
            rows.push_back(make_row(p.t, rates, from_matrix(p.rho)));
        }
        return rows;
    }
    for (const auto& s : analytic_trajectory(params, init, times, cfg.tol, cfg.threads)) {
        rows.push_back(make_row(s.t, s.rates, s.state));
    }
    return rows;
}

/// 17 significant digits, '.' decimal separator, independent of the locale.
inline std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

inline std::string column_header(std::string_view name, const SimConfig& cfg) {
    std::string scale;
    if (cfg.two_omega > 0.0) {
        scale = ";2Omega=" + format_number(cfg.two_omega);
        if (!cfg.two_omega_unit.empty()) scale += " " + cfg.two_omega_unit;
    }
    if (name == "t") return "t[1/(2Omega)" + scale + "]";
    if (name == "gamma_minus" || name == "gamma_plus") return std::string(name) + "[2Omega" + scale + "]";
    return std::string(name);
}

inline std::string to_csv(const std::vector<TimeSeriesRow>& rows, const SimConfig& cfg) {
    std::vector<std::size_t> selected;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        if (std::find(cfg.columns.begin(), cfg.columns.end(), kColumns[c]) != cfg.columns.end()) {
            selected.push_back(c);
        }
    }
    std::string out;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (i) out += ',';
        out += column_header(kColumns[selected[i]], cfg);
    }
    out += '\n';
    for (const auto& row : rows) {
        const auto v = row.values();
        for (std::size_t i = 0; i < selected.size(); ++i) {
            if (i) out += ',';
            out += format_number(v[selected[i]]);
        }
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("write to '" + path + "' failed");
}

/// Largest absolute difference over the state and observable columns.
inline double max_discrepancy(const std::vector<TimeSeriesRow>& a, const std::vector<TimeSeriesRow>& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto va = a[k].values();
        const auto vb = b[k].values();
        for (std::size_t c = 5; c < va.size(); ++c) worst = std::max(worst, std::abs(va[c] - vb[c]));
    }
    return worst;
}

/// Returns a description of the first row violating the population
/// invariants, or nothing when all rows pass.
inline std::optional<std::string> check_rows(const std::vector<TimeSeriesRow>& rows, double tol) {
    for (const auto& r : rows) {
        auto fail = [&](const std::string& what) {
            return "t = " + format_number(r.t) + ": " + what;
        };
        if (std::abs(r.p_E0 + r.p_Eminus + r.p_Eplus - 1.0) > tol) return fail("dressed populations do not sum to 1");
        if (std::abs(r.P_0g + r.P_1g + r.P_0e - 1.0) > tol) return fail("bare populations do not sum to 1");
        for (double p : {r.p_E0, r.p_Eminus, r.p_Eplus, r.P_0g, r.P_1g, r.P_0e}) {
            if (p < -tol || p > 1.0 + tol) return fail("population outside [0, 1]");
        }
        if (r.coh_re * r.coh_re + r.coh_im * r.coh_im > r.p_Eminus * r.p_Eplus + tol) {
            return fail("coherence exceeds sqrt(p_minus * p_plus)");
        }
    }
    return std::nullopt;
}

struct RateRow {
    double t{0.0};
    double gamma_minus{0.0};
    double gamma_plus{0.0};
};

inline std::vector<RateRow> rates_table(const SimConfig& cfg) {
    const auto params = build_system(cfg);
    std::vector<RateRow> out;
    for (double t : time_grid(cfg.time)) {
        out.push_back({t, gamma_closed(params.spectrum, params.omega_minus(), t),
                       gamma_closed(params.spectrum, params.omega_plus(), t)});
    }
    return out;
}

inline std::string rates_csv(const std::vector<RateRow>& rows, const SimConfig& cfg) {
    std::string out = column_header("t", cfg) + "," + column_header("gamma_minus", cfg) + "," +
                      column_header("gamma_plus", cfg) + "\n";
    for (const auto& r : rows) {
        out += format_number(r.t) + "," + format_number(r.gamma_minus) + "," + format_number(r.gamma_plus) + "\n";
    }
    return out;
}

struct SweepSummaryRow {
    double value{0.0};
    double gamma_minus_inf{0.0};
    double gamma_plus_inf{0.0};
    double plateau_P_0e{0.0}; // mean P_0e over [window_start, window_end]
};

inline std::string summary_csv(const std::vector<SweepSummaryRow>& rows, const std::string& param) {
    std::string out = param + ",gamma_minus_inf[2Omega],gamma_plus_inf[2Omega],P_0e_plateau\n";
    for (const auto& r : rows) {
        out += format_number(r.value) + "," + format_number(r.gamma_minus_inf) + "," +
               format_number(r.gamma_plus_inf) + "," + format_number(r.plateau_P_0e) + "\n";
    }
    return out;
}

inline double plateau_mean(const std::vector<TimeSeriesRow>& rows, double start, double end) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
        if (r.t >= start && r.t <= end) {
            sum += r.P_0e;
            ++n;
        }
    }
    return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

using SweepSink = std::function<void(std::size_t index, double value, const std::vector<TimeSeriesRow>& rows)>;

/// Re-runs `cfg` with `param` set to each value. Values run concurrently
/// (cfg.threads workers, each single-threaded); the sink is called from
/// worker threads and must only touch per-index state. The summary is in
/// value order. Rk4 is used only when it is the sole configured engine.
inline std::vector<SweepSummaryRow> sweep(const SimConfig& cfg, const std::string& param,
                                          const std::vector<double>& values, const SweepSink& sink = {}) {
    const auto keys = numeric_keys();
    if (std::find(keys.begin(), keys.end(), param) == keys.end()) {
        throw ConfigError(param, 0, "UnknownParameter: not a numeric configuration key");
    }
    std::vector<SweepSummaryRow> summary(values.size());
    detail::parallel_for(values.size(), cfg.threads, [&](std::size_t i) {
        SimConfig local = cfg;
        local.threads = 1;
        apply_setting(local, param, format_number(values[i]));
        const auto rows = simulate(local, local.engine == Engine::Rk4 ? Engine::Rk4 : Engine::Analytic);
        const auto params = build_system(local);
        summary[i] = {values[i], stationary_rate(params.spectrum, params.omega_minus()),
                      stationary_rate(params.spectrum, params.omega_plus()),
                      plateau_mean(rows, local.window_start, local.window_end)};
        if (sink) sink(i, values[i], rows);
    });
    return summary;
}

} // namespace nmcavity
