// Command-line front end: runs a tunneling, eigenvalue, or density-comparison
// experiment from a config file or bundled preset, writes CSV time series and
// a JSON summary, and prints a per-N result table.
//
// Exit codes: 0 success, 2 config error, 3 every N blew up, 4 oracle failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "zevca/experiment.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitAllBlewUp = 3;
constexpr int kExitOracleFailure = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw zevca::ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stoi(item));
    if (out.empty()) throw zevca::ConfigError(0, "--n-list must not be empty");
    return out;
}

void print_summary(const zevca::RunSummary& summary) {
    std::printf("experiment: %s\n", summary.experiment.c_str());
    for (const std::string& w : summary.warnings) std::printf("warning: %s\n", w.c_str());
    if (summary.experiment == "compare") {
        std::printf("%-6s %-14s %-14s %s\n", "N", "max_dev", "rms_dev", "status");
        for (const auto& r : summary.runs)
            std::printf("%-6d %-14.6e %-14.6e %s\n", r.order, r.value,
                        r.rms_deviation.value_or(0.0), r.status.c_str());
    } else {
        std::printf("oracle value: %.10e (t_final = %g)\n", summary.oracle.value,
                    summary.oracle.t_final);
        std::printf("%-6s %-18s %-12s %-10s %s\n", "N", "value", "rel_error", "converged",
                    "status");
        for (const auto& r : summary.runs)
            std::printf("%-6d %-18.10e %-12.4e %-10s %s\n", r.order, r.value, r.rel_error,
                        r.converged ? "yes" : "no", r.status.c_str());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zevca: single-trajectory complex-phase propagator with a split-operator "
                 "grid reference"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file or preset");
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::string n_list_text;
    bool deterministic = false;
    run->add_option("config", config_path, "path to a config file");
    run->add_option("--preset", preset,
                    "bundled benchmark: eckart_e20 | eckart_p0 | quartic | morse_h2");
    run->add_option("--out", out_dir, "output directory (overrides config and ZEVCA_OUT)");
    run->add_option("--n-list", n_list_text, "comma-separated truncation orders, e.g. 2,6,10");
    run->add_flag("--seedless-deterministic", deterministic,
                  "omit wall-clock timings so repeated runs produce identical bytes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (config_path.empty() == preset.empty()) {
            std::cerr << "error: give either a config path or --preset\n";
            return kExitConfigError;
        }
        const std::string text =
            preset.empty() ? read_file(config_path) : zevca::preset_config(preset);
        zevca::ExperimentConfig cfg = zevca::parse_config(text);

        if (const char* env = std::getenv("ZEVCA_OUT"); env && *env) cfg.output_dir = env;
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!n_list_text.empty()) cfg.n_list = parse_n_list(n_list_text);
        zevca::validate_config(cfg);

        zevca::RunSummary summary;
        try {
            summary = zevca::run_experiment(cfg);
        } catch (const zevca::ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            std::cerr << "oracle failure: " << e.what() << "\n";
            return kExitOracleFailure;
        }
        summary.deterministic_output = deterministic;
        zevca::write_summary_json(summary, std::filesystem::path(cfg.output_dir) / "summary.json");
        print_summary(summary);

        const bool all_failed =
            !summary.runs.empty() &&
            std::all_of(summary.runs.begin(), summary.runs.end(),
                        [](const zevca::NRunResult& r) { return r.status != "ok"; });
        if (all_failed) {
            std::cerr << "error: every truncation order failed\n";
            return kExitAllBlewUp;
        }
        return 0;
    } catch (const zevca::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}
