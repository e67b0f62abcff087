// config.hpp — Flat key=value simulation configuration, presets and echo
//
// Frequencies are multiples of 2*Omega and times multiples of 1/(2*Omega).
// Spectrum centers are given as detunings from one of the dressed Bohr
// frequencies omega0 -/+ Omega (the "anchor").

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "nmcavity/dynamics.hpp"
#include "nmcavity/error.hpp"
#include "nmcavity/spectral.hpp"

namespace nmcavity {

class ConfigError : public Error {
public:
    ConfigError(std::string field, std::size_t line, const std::string& what)
        : Error(format(field, line, what)), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; } // 0 when not from a file

private:
    static std::string format(const std::string& field, std::size_t line, const std::string& what) {
        std::string out;
        if (line > 0) out += "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += field + ": ";
        return out + what;
    }

    std::string field_;
    std::size_t line_;
};

enum class SpectrumKind { Flat, Lorentzian, Gap };
enum class Anchor { Minus, Plus };
enum class Spacing { Linear, Log };
enum class Engine { Analytic, Rk4, Both };

/// Column names of a dynamics time-series row, in emission order.
inline constexpr std::array<std::string_view, 13> kColumns = {
    "t",     "gamma_minus", "gamma_plus", "I_minus", "I_plus", "p_E0", "p_Eminus",
    "p_Eplus", "coh_re",    "coh_im",     "P_0g",    "P_1g",   "P_0e"};

struct SpectrumConfig {
    SpectrumKind kind{SpectrumKind::Gap};
    Anchor anchor{Anchor::Plus};
    double level{0.0};
    double alpha{0.1};
    double lambda{0.1};
    double detuning{0.0};
    double alpha1{0.1};
    double lambda1{100.0};
    double detuning1{0.0};
    double alpha2{0.099};
    double lambda2{0.1};
    double detuning2{0.0};
};

struct TimeGridConfig {
    double t_end{400.0};
    std::size_t n_points{4001};
    Spacing spacing{Spacing::Linear};
    double t_min{1e-3}; // first positive point of a log grid
};

struct SimConfig {
    SpectrumConfig spectrum;
    double omega0{0.0};
    double two_omega{0.0};      // physical value of 2*Omega, labeling only (0 = unset)
    std::string two_omega_unit; // unit of two_omega, labeling only
    std::string initial_state{"atom-excited"};
    DressedDensity initial_dressed{DressedDensity::atom_excited()};
    TimeGridConfig time;
    Engine engine{Engine::Analytic};
    double dt{1e-3};
    double tol{1e-12};
    unsigned threads{1};
    std::vector<std::string> columns{kColumns.begin(), kColumns.end()};
    double window_start{200.0};
    double window_end{400.0};
};

namespace config_detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

inline double parse_double(const std::string& key, const std::string& value, std::size_t line) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    if (!value.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
        throw ConfigError(key, line, "expected a finite number, got '" + value + "'");
    }
    return out;
}

inline std::size_t parse_size(const std::string& key, const std::string& value, std::size_t line) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError(key, line, "expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

template <class Enum, std::size_t N>
Enum parse_enum(const std::string& key, const std::string& value, std::size_t line,
                const std::array<std::pair<std::string_view, Enum>, N>& names) {
    for (const auto& [name, e] : names) {
        if (value == name) return e;
    }
    std::string allowed;
    for (const auto& [name, e] : names) allowed += (allowed.empty() ? "" : "|") + std::string(name);
    throw ConfigError(key, line, "expected one of " + allowed + ", got '" + value + "'");
}

template <class Enum, std::size_t N>
std::string enum_name(Enum e, const std::array<std::pair<std::string_view, Enum>, N>& names) {
    for (const auto& [name, v] : names) {
        if (v == e) return std::string(name);
    }
    return {};
}

inline constexpr std::array<std::pair<std::string_view, SpectrumKind>, 3> kKinds{
    {{"flat", SpectrumKind::Flat}, {"lorentzian", SpectrumKind::Lorentzian}, {"gap", SpectrumKind::Gap}}};
inline constexpr std::array<std::pair<std::string_view, Anchor>, 2> kAnchors{
    {{"minus", Anchor::Minus}, {"plus", Anchor::Plus}}};
inline constexpr std::array<std::pair<std::string_view, Spacing>, 2> kSpacings{
    {{"linear", Spacing::Linear}, {"log", Spacing::Log}}};
inline constexpr std::array<std::pair<std::string_view, Engine>, 3> kEngines{
    {{"analytic", Engine::Analytic}, {"rk4", Engine::Rk4}, {"both", Engine::Both}}};

struct NumericField {
    std::string_view key;
    double SimConfig::*top{nullptr};
    double SpectrumConfig::*spec{nullptr};
    double TimeGridConfig::*grid{nullptr};
    double DressedDensity::*state{nullptr};
};

inline const std::vector<NumericField>& numeric_fields() {
    static const std::vector<NumericField> fields = {
        {"spectrum.level", nullptr, &SpectrumConfig::level},
        {"spectrum.alpha", nullptr, &SpectrumConfig::alpha},
        {"spectrum.lambda", nullptr, &SpectrumConfig::lambda},
        {"spectrum.detuning", nullptr, &SpectrumConfig::detuning},
        {"spectrum.alpha1", nullptr, &SpectrumConfig::alpha1},
        {"spectrum.lambda1", nullptr, &SpectrumConfig::lambda1},
        {"spectrum.detuning1", nullptr, &SpectrumConfig::detuning1},
        {"spectrum.alpha2", nullptr, &SpectrumConfig::alpha2},
        {"spectrum.lambda2", nullptr, &SpectrumConfig::lambda2},
        {"spectrum.detuning2", nullptr, &SpectrumConfig::detuning2},
        {"system.omega0", &SimConfig::omega0},
        {"system.two_omega", &SimConfig::two_omega},
        {"time.t_end", nullptr, nullptr, &TimeGridConfig::t_end},
        {"time.t_min", nullptr, nullptr, &TimeGridConfig::t_min},
        {"initial.p0", nullptr, nullptr, nullptr, &DressedDensity::p0},
        {"initial.p_minus", nullptr, nullptr, nullptr, &DressedDensity::p_minus},
        {"initial.p_plus", nullptr, nullptr, nullptr, &DressedDensity::p_plus},
        {"solver.dt", &SimConfig::dt},
        {"solver.tol", &SimConfig::tol},
        {"sweep.window_start", &SimConfig::window_start},
        {"sweep.window_end", &SimConfig::window_end},
    };
    return fields;
}

inline double* numeric_slot(SimConfig& cfg, const NumericField& f) {
    if (f.top) return &(cfg.*f.top);
    if (f.spec) return &(cfg.spectrum.*f.spec);
    if (f.grid) return &(cfg.time.*f.grid);
    return &(cfg.initial_dressed.*f.state);
}

} // namespace config_detail

/// Names of the numeric keys a sweep may vary.
inline std::vector<std::string> numeric_keys() {
    std::vector<std::string> out;
    for (const auto& f : config_detail::numeric_fields()) out.emplace_back(f.key);
    out.emplace_back("initial.coh_re");
    out.emplace_back("initial.coh_im");
    return out;
}

/// Sets one key. `line` is only used in error messages.
inline void apply_setting(SimConfig& cfg, const std::string& key, const std::string& value,
                          std::size_t line = 0) {
    using namespace config_detail;
    for (const auto& f : numeric_fields()) {
        if (key == f.key) {
            *numeric_slot(cfg, f) = parse_double(key, value, line);
            return;
        }
    }
    if (key == "initial.coh_re") {
        cfg.initial_dressed.coh.real(parse_double(key, value, line));
    } else if (key == "initial.coh_im") {
        cfg.initial_dressed.coh.imag(parse_double(key, value, line));
    } else if (key == "spectrum.kind") {
        cfg.spectrum.kind = parse_enum(key, value, line, kKinds);
    } else if (key == "spectrum.anchor") {
        cfg.spectrum.anchor = parse_enum(key, value, line, kAnchors);
    } else if (key == "system.two_omega_unit") {
        if (value.find_first_of(",\"\n") != std::string::npos) {
            throw ConfigError(key, line, "unit label may not contain commas or quotes");
        }
        cfg.two_omega_unit = value;
    } else if (key == "initial.state") {
        if (value != "atom-excited" && value != "ground" && value != "dressed") {
            throw ConfigError(key, line, "expected atom-excited|ground|dressed, got '" + value + "'");
        }
        cfg.initial_state = value;
    } else if (key == "time.n_points") {
        cfg.time.n_points = parse_size(key, value, line);
    } else if (key == "time.spacing") {
        cfg.time.spacing = parse_enum(key, value, line, kSpacings);
    } else if (key == "solver.engine") {
        cfg.engine = parse_enum(key, value, line, kEngines);
    } else if (key == "solver.threads") {
        cfg.threads = static_cast<unsigned>(parse_size(key, value, line));
    } else if (key == "output.columns") {
        std::vector<std::string> cols;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            if (std::find(kColumns.begin(), kColumns.end(), item) == kColumns.end()) {
                throw ConfigError(key, line, "unknown column '" + item + "'");
            }
            cols.push_back(item);
        }
        if (cols.empty()) throw ConfigError(key, line, "no columns selected");
        cfg.columns = std::move(cols);
    } else {
        throw ConfigError(key, line, "unknown key");
    }
}

/// Built-in scenarios. `figure1`: Lorentzian background with a Lorentzian gap,
/// both centered on omega0 + Omega. `lorentzian`: a single peak centered on
/// omega0 - Omega.
inline SimConfig preset(const std::string& name) {
    SimConfig cfg;
    if (name == "figure1") {
        cfg.spectrum.kind = SpectrumKind::Gap;
        cfg.spectrum.anchor = Anchor::Plus;
        cfg.spectrum.alpha1 = 0.1;
        cfg.spectrum.lambda1 = 100.0;
        cfg.spectrum.alpha2 = 0.099;
        cfg.spectrum.lambda2 = 0.1;
        return cfg;
    }
    if (name == "lorentzian") {
        cfg.spectrum.kind = SpectrumKind::Lorentzian;
        cfg.spectrum.anchor = Anchor::Minus;
        cfg.spectrum.alpha = 0.1;
        cfg.spectrum.lambda = 0.1;
        return cfg;
    }
    throw ConfigError("preset", 0, "unknown preset '" + name + "' (figure1|lorentzian)");
}

/// Parses key=value text. '#' starts a comment. A `preset` key, wherever it
/// appears, selects the base configuration the other keys override.
inline SimConfig parse_config(std::string_view text) {
    struct Entry {
        std::string key;
        std::string value;
        std::size_t line;
    };
    std::vector<Entry> entries;
    std::optional<Entry> preset_entry;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string line = config_detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("", line_no, "expected key = value");
        Entry e{config_detail::trim(line.substr(0, eq)), config_detail::trim(line.substr(eq + 1)), line_no};
        if (e.key.empty()) throw ConfigError("", line_no, "empty key");
        if (e.key == "preset") {
            if (preset_entry) throw ConfigError("preset", line_no, "preset given twice");
            preset_entry = e;
        } else {
            entries.push_back(std::move(e));
        }
    }

    SimConfig cfg;
    if (preset_entry) {
        try {
            cfg = preset(preset_entry->value);
        } catch (const ConfigError& err) {
            throw ConfigError("preset", preset_entry->line, "unknown preset '" + preset_entry->value + "'");
        }
    }
    for (const auto& e : entries) apply_setting(cfg, e.key, e.value, e.line);
    return cfg;
}

/// Full, explicit echo of a configuration; parse_config(print_config(c)) == c.
inline std::string print_config(const SimConfig& cfg) {
    using namespace config_detail;
    std::ostringstream out;
    auto put = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
    SimConfig copy = cfg;
    put("spectrum.kind", enum_name(cfg.spectrum.kind, kKinds));
    put("spectrum.anchor", enum_name(cfg.spectrum.anchor, kAnchors));
    for (const auto& f : numeric_fields()) put(f.key, format_double(*numeric_slot(copy, f)));
    put("initial.coh_re", format_double(cfg.initial_dressed.coh.real()));
    put("initial.coh_im", format_double(cfg.initial_dressed.coh.imag()));
    put("initial.state", cfg.initial_state);
    if (!cfg.two_omega_unit.empty()) put("system.two_omega_unit", cfg.two_omega_unit);
    put("time.n_points", std::to_string(cfg.time.n_points));
    put("time.spacing", enum_name(cfg.time.spacing, kSpacings));
    put("solver.engine", enum_name(cfg.engine, kEngines));
    put("solver.threads", std::to_string(cfg.threads));
    std::string cols;
    for (const auto& c : cfg.columns) cols += (cols.empty() ? "" : ",") + c;
    put("output.columns", cols);
    return out.str();
}

inline bool equivalent(const SimConfig& a, const SimConfig& b) {
    return print_config(a) == print_config(b);
}

/// Spectrum with absolute center frequencies.
inline SpectralDensity build_spectrum(const SimConfig& cfg, double Omega = 0.5) {
    const double anchor = cfg.spectrum.anchor == Anchor::Minus ? cfg.omega0 - Omega : cfg.omega0 + Omega;
    const auto& s = cfg.spectrum;
    switch (s.kind) {
    case SpectrumKind::Flat:
        return SpectralDensity::validate(FlatSpec{s.level});
    case SpectrumKind::Lorentzian:
        return SpectralDensity::validate(LorentzianSpec{s.alpha, s.lambda, anchor + s.detuning});
    case SpectrumKind::Gap:
        break;
    }
    return SpectralDensity::validate(
        GapSpec{s.alpha1, s.lambda1, anchor + s.detuning1, s.alpha2, s.lambda2, anchor + s.detuning2});
}

/// Checks the non-spectral invariants; spectrum errors surface from build_spectrum.
inline void validate_config(const SimConfig& cfg) {
    if (!(cfg.time.t_end > 0.0)) throw ConfigError("time.t_end", 0, "must be > 0");
    if (cfg.time.n_points < 2) throw ConfigError("time.n_points", 0, "must be >= 2");
    if (cfg.time.spacing == Spacing::Log && !(cfg.time.t_min > 0.0 && cfg.time.t_min < cfg.time.t_end)) {
        throw ConfigError("time.t_min", 0, "log spacing needs 0 < t_min < t_end");
    }
    if (!(cfg.dt > 0.0)) throw ConfigError("solver.dt", 0, "must be > 0");
    if (!(cfg.tol > 0.0)) throw ConfigError("solver.tol", 0, "must be > 0");
    if (cfg.threads == 0) throw ConfigError("solver.threads", 0, "must be >= 1");
    if (!(cfg.window_start <= cfg.window_end)) {
        throw ConfigError("sweep.window_start", 0, "window start after window end");
    }
}

inline DressedDensity resolve_initial_state(const SimConfig& cfg) {
    DressedDensity init = cfg.initial_state == "atom-excited" ? DressedDensity::atom_excited()
                          : cfg.initial_state == "ground"     ? DressedDensity::ground()
                                                              : cfg.initial_dressed;
    init.validate();
    return init;
}

inline SystemParams build_system(const SimConfig& cfg) {
    validate_config(cfg);
    return SystemParams{build_spectrum(cfg), 0.5, cfg.omega0};
}

/// Output times: t = 0 first, then a linear grid or a log grid from t_min.
inline std::vector<double> time_grid(const TimeGridConfig& grid) {
    std::vector<double> t(grid.n_points);
    const double last = static_cast<double>(grid.n_points - 1);
    if (grid.spacing == Spacing::Linear) {
        for (std::size_t k = 0; k < grid.n_points; ++k) t[k] = grid.t_end * static_cast<double>(k) / last;
        return t;
    }
    t[0] = 0.0;
    const double lo = std::log(grid.t_min);
    const double hi = std::log(grid.t_end);
    const double denom = std::max(1.0, last - 1.0);
    for (std::size_t k = 1; k < grid.n_points; ++k) {
        t[k] = std::exp(lo + (hi - lo) * static_cast<double>(k - 1) / denom);
    }
    t.back() = grid.t_end;
    return t;
}

} // namespace nmcavity
