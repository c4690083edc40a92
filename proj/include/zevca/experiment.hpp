#pragma once

// Experiment front end: config parsing, the tunnel / eigen / compare
// pipelines against the grid reference, and CSV + JSON output.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "zevca/grid_oracle.hpp"
#include "zevca/observables.hpp"
#include "zevca/propagator.hpp"

namespace zevca {

enum class ExperimentKind { Tunnel, Eigen, Compare };

struct OracleConfig {
    double xmin = -12.0;
    double xmax = 12.0;
    int npoints = 4096;
    double dt = 5e-4;
    // 0 = automatic: tunnel runs stop on flux decay, eigen/compare runs reuse
    // the trajectory t_final.
    double t_final = 0.0;
    // 0 = automatic: pick a stride that keeps the CSV around 2000 rows.
    int record_stride = 0;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Tunnel;
    PotentialSpec potential = EckartBarrier{};
    GaussianParams gaussian;
    bool gamma0_explicit = false; // false: normalization convention at run time
    double x0 = 0.0;
    std::vector<int> n_list = {2, 4, 6, 8, 10};
    IntegrationConfig integration;
    OracleConfig oracle;
    std::string output_dir = "zevca_out";
    double hbar = 1.0;
    double mass = 1.0;
};

struct ConfigError : std::runtime_error {
    int line; // 0 when not tied to a specific line

    ConfigError(int line_number, const std::string& what_arg)
        : std::runtime_error(line_number > 0
                                 ? "line " + std::to_string(line_number) + ": " + what_arg
                                 : what_arg),
          line(line_number) {}
};

// Parses the sectioned key=value format described in the README. Unknown
// sections or keys are rejected; messages carry line numbers.
ExperimentConfig parse_config(const std::string& text);

// Semantic checks shared by the parser and config_from_json.
void validate_config(const ExperimentConfig& cfg);

// Bundled benchmark configurations: eckart_e20, eckart_p0, quartic, morse_h2.
const std::vector<std::string>& preset_names();
std::string preset_config(const std::string& name); // throws ConfigError on unknown name

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct NRunResult {
    int order = 0;
    double value = 0.0;     // terminal T, E1 plateau, or max density deviation
    double rel_error = 0.0; // |value - oracle| / |oracle|
    bool converged = false;
    bool blew_up = false;
    std::string status = "ok"; // ok | blowup | integration_failure
    double wall_ms = 0.0;
    std::optional<double> rms_deviation; // compare runs only
};

struct OracleResult {
    double value = 0.0;
    double t_final = 0.0;
    double wall_ms = 0.0;
    bool edge_violation = false;   // boundary density exceeded the monitor threshold
    bool energy_monotone = true;   // imaginary-time Rayleigh decrease held
};

struct RunSummary {
    int schema_version = 1;
    std::string experiment;
    OracleResult oracle;
    std::vector<NRunResult> runs;
    std::vector<std::string> warnings; // setup diagnostics, interpolation notes
    nlohmann::json config_echo;
    bool deterministic_output = false; // wall-clock fields omitted from JSON
};

// Each pipeline writes its CSV files into cfg.output_dir and returns the
// summary; write_summary_json persists it.
RunSummary run_tunnel(const ExperimentConfig& cfg);
RunSummary run_eigen(const ExperimentConfig& cfg);
RunSummary run_compare(const ExperimentConfig& cfg);
RunSummary run_experiment(const ExperimentConfig& cfg); // dispatch on cfg.experiment

nlohmann::json summary_to_json(const RunSummary& summary);
void write_summary_json(const RunSummary& summary, const std::filesystem::path& path);

// CSV helper shared by the pipelines and the golden-file tests: header row
// plus %.12e formatted columns.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

} // namespace zevca
