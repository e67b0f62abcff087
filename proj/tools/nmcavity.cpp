// nmcavity.cpp — Command-line driver: run, sweep and rates subcommands
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error, 4 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nmcavity/config.hpp"
#include "nmcavity/simulation.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct Source {
    std::string config_path;
    std::string preset;
    std::vector<std::string> overrides;
};

void add_source_options(CLI::App* cmd, Source& src) {
    cmd->add_option("--config", src.config_path, "key=value configuration file");
    cmd->add_option("--preset", src.preset, "built-in configuration (figure1|lorentzian)");
    cmd->add_option("--set", src.overrides, "override a key, e.g. --set spectrum.lambda=10");
}

nmcavity::SimConfig load(const Source& src) {
    std::string text;
    if (!src.preset.empty()) text += "preset = " + src.preset + "\n";
    if (!src.config_path.empty()) {
        std::ifstream f(src.config_path, std::ios::binary);
        if (!f) throw nmcavity::IoError("cannot read config '" + src.config_path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        text += ss.str();
    }
    if (src.config_path.empty() && src.preset.empty()) {
        throw nmcavity::ConfigError("--config", 0, "one of --config or --preset is required");
    }
    auto cfg = nmcavity::parse_config(text);
    for (const auto& kv : src.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw nmcavity::ConfigError(kv, 0, "--set expects key=value");
        nmcavity::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

std::string stem_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
    return path;
}

void emit(const std::string& out, const std::string& csv) {
    if (out.empty() || out == "-") {
        std::cout << csv;
        std::cout.flush();
        if (!std::cout) throw nmcavity::IoError("write to stdout failed");
    } else {
        nmcavity::write_file(out, csv);
    }
}

int check_or_fail(const std::vector<nmcavity::TimeSeriesRow>& rows, double tol, const std::string& label) {
    if (auto problem = nmcavity::check_rows(rows, tol)) {
        std::cerr << "check failed (" << label << "): " << *problem << '\n';
        return kExitNumerical;
    }
    return 0;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) {
            throw nmcavity::ConfigError("--values", 0, "not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Markovian cavity-loss dynamics of the resonant Jaynes-Cummings model"};
    app.require_subcommand(1);

    Source run_src;
    std::string run_out;
    std::string engine_flag;
    bool check = false;
    bool print_cfg = false;
    auto* run = app.add_subcommand("run", "time series of rates, integrals and populations");
    add_source_options(run, run_src);
    run->add_option("--engine", engine_flag, "analytic|rk4|both (overrides solver.engine)");
    run->add_option("--out", run_out, "output CSV ('-' or omitted: stdout; with both: file stem)");
    run->add_flag("--check", check, "validate population invariants of every emitted row");
    run->add_flag("--print-config", print_cfg, "print the resolved configuration and exit");

    Source sweep_src;
    std::string sweep_param;
    std::string sweep_values;
    std::string sweep_out = "sweep";
    auto* sw = app.add_subcommand("sweep", "repeat a run over values of one numeric key");
    add_source_options(sw, sweep_src);
    sw->add_option("--param", sweep_param, "configuration key to vary")->required();
    sw->add_option("--values", sweep_values, "comma-separated values")->required();
    sw->add_option("--out", sweep_out, "output stem for per-value files and the summary");

    Source rates_src;
    std::string rates_out;
    auto* rt = app.add_subcommand("rates", "decay rates only, on the configured time grid");
    add_source_options(rt, rates_src);
    rt->add_option("--out", rates_out, "output CSV ('-' or omitted: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (run->parsed()) {
            auto cfg = load(run_src);
            if (!engine_flag.empty()) nmcavity::apply_setting(cfg, "solver.engine", engine_flag);
            if (print_cfg) {
                nmcavity::build_system(cfg);
                std::cout << nmcavity::print_config(cfg);
                return 0;
            }
            const double check_tol = 1e-9;
            if (cfg.engine != nmcavity::Engine::Both) {
                const auto rows = nmcavity::simulate(cfg, cfg.engine);
                emit(run_out, nmcavity::to_csv(rows, cfg));
                return check ? check_or_fail(rows, check_tol, "run") : 0;
            }
            const std::string stem = stem_of(run_out.empty() || run_out == "-" ? "nmcavity" : run_out);
            const auto analytic = nmcavity::simulate(cfg, nmcavity::Engine::Analytic);
            const auto rk4 = nmcavity::simulate(cfg, nmcavity::Engine::Rk4);
            nmcavity::write_file(stem + ".analytic.csv", nmcavity::to_csv(analytic, cfg));
            nmcavity::write_file(stem + ".rk4.csv", nmcavity::to_csv(rk4, cfg));
            const std::string report = "max_discrepancy," + nmcavity::format_number(
                                                                 nmcavity::max_discrepancy(analytic, rk4)) + "\n";
            nmcavity::write_file(stem + ".discrepancy.csv", report);
            std::cout << report;
            if (check) {
                if (int rc = check_or_fail(analytic, check_tol, "analytic")) return rc;
                return check_or_fail(rk4, check_tol, "rk4");
            }
            return 0;
        }
        if (sw->parsed()) {
            const auto cfg = load(sweep_src);
            const auto values = parse_values(sweep_values);
            const auto summary = nmcavity::sweep(cfg, sweep_param, values,
                [&](std::size_t, double value, const std::vector<nmcavity::TimeSeriesRow>& rows) {
                    nmcavity::write_file(sweep_out + "." + sweep_param + "=" + nmcavity::format_number(value) + ".csv",
                                         nmcavity::to_csv(rows, cfg));
                });
            nmcavity::write_file(sweep_out + ".summary.csv", nmcavity::summary_csv(summary, sweep_param));
            return 0;
        }
        if (rt->parsed()) {
            const auto cfg = load(rates_src);
            emit(rates_out, nmcavity::rates_csv(nmcavity::rates_table(cfg), cfg));
            return 0;
        }
    } catch (const nmcavity::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const nmcavity::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nmcavity::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const nmcavity::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
