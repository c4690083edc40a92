#include "zevca/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace zevca {

namespace {

namespace fs = std::filesystem;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

GaussianParams resolve_gaussian(const ExperimentConfig& cfg) {
    GaussianParams g = cfg.gaussian;
    if (!cfg.gamma0_explicit)
        g.gamma0 = GaussianParams::normalization_gamma(g.alpha0, cfg.hbar);
    validate(g);
    return g;
}

fs::path ensure_output_dir(const ExperimentConfig& cfg) {
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError(0, "cannot create output directory '" + cfg.output_dir + "'");
    return dir;
}

int auto_stride(long total_steps, int configured, long target_rows = 2000) {
    if (configured > 0) return configured;
    return static_cast<int>(std::max(1L, total_steps / target_rows));
}

double relative_error(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

constexpr double kEdgeMonitor = 1e-10;

// Real-time grid run recording density at the flux plane and the transmitted
// probability. The reference curve is the NET transmitted probability,
// integral of |psi|^2 beyond the plane minus its t=0 value: by continuity this
// equals the time integral of J at the plane, which is the quantity the
// trajectory pipeline accumulates. The distinction matters when the packet is
// launched close enough to the barrier that it initially straddles the plane.
// With t_final = 0 the run stops once the density at the plane has peaked and
// decayed and the transmitted probability has leveled off.
struct OracleTunnelSeries {
    std::vector<double> times, density, transmitted;
    bool edge_violation = false;
    double t_final = 0.0;
};

OracleTunnelSeries oracle_tunnel_run(const ExperimentConfig& cfg, const GaussianParams& g) {
    const GridSpec spec{cfg.oracle.xmin, cfg.oracle.xmax, cfg.oracle.npoints};
    GridState state = initialize_gaussian(spec, g, cfg.mass, cfg.hbar);
    const SplitOperator stepper(spec, cfg.potential, cfg.oracle.dt, TimeMode::RealTime, cfg.mass,
                                cfg.hbar);

    OracleTunnelSeries out;
    const double dt = cfg.oracle.dt;
    const bool auto_stop = cfg.oracle.t_final <= 0.0;
    const double t_cap = auto_stop ? 100.0 : cfg.oracle.t_final;
    const long total_steps = std::lround(t_cap / dt);
    const int stride = auto_stride(total_steps, cfg.oracle.record_stride);

    const double initial_transmitted = transmitted_probability(state, cfg.x0);
    const auto record = [&](long step) {
        out.times.push_back(step * dt);
        out.density.push_back(local_density(state, cfg.x0));
        out.transmitted.push_back(transmitted_probability(state, cfg.x0) - initial_transmitted);
        if (edge_density(state) > kEdgeMonitor) out.edge_violation = true;
    };
    record(0);

    double peak_density = out.density.front();
    double last_T = out.transmitted.front();
    int quiet_records = 0;
    for (long step = 1; step <= total_steps; ++step) {
        stepper.advance(state);
        if (step % stride == 0 || step == total_steps) {
            record(step);
            const double d = out.density.back();
            const double T = out.transmitted.back();
            peak_density = std::max(peak_density, d);
            if (auto_stop && out.times.back() > 0.5) {
                const bool flux_gone = d < 1e-6 * peak_density;
                const bool t_settled = std::abs(T - last_T) < 1e-9 + 1e-6 * std::abs(T);
                quiet_records = (flux_gone && t_settled) ? quiet_records + 1 : 0;
                if (quiet_records >= 5) break;
            }
            last_T = out.transmitted.back();
        }
    }
    out.t_final = out.times.back();
    return out;
}

// Imaginary-time grid relaxation recording the Rayleigh energy.
struct OracleEigenSeries {
    std::vector<double> taus, energy;
    bool monotone = true;
    double t_final = 0.0;
};

OracleEigenSeries oracle_eigen_run(const ExperimentConfig& cfg, const GaussianParams& g) {
    const GridSpec spec{cfg.oracle.xmin, cfg.oracle.xmax, cfg.oracle.npoints};
    GridState state = initialize_gaussian(spec, g, cfg.mass, cfg.hbar);
    const SplitOperator stepper(spec, cfg.potential, cfg.oracle.dt, TimeMode::ImaginaryTime,
                                cfg.mass, cfg.hbar);

    OracleEigenSeries out;
    const double dt = cfg.oracle.dt;
    const double tau_final = cfg.oracle.t_final > 0.0 ? cfg.oracle.t_final
                                                      : cfg.integration.t_final;
    const long total_steps = std::lround(tau_final / dt);
    const int stride = auto_stride(total_steps, cfg.oracle.record_stride);

    out.taus.push_back(0.0);
    out.energy.push_back(rayleigh_energy(state, cfg.potential));
    for (long step = 1; step <= total_steps; ++step) {
        stepper.advance(state);
        if (step % stride == 0 || step == total_steps) {
            out.taus.push_back(step * dt);
            out.energy.push_back(rayleigh_energy(state, cfg.potential));
            const std::size_t k = out.energy.size() - 1;
            if (out.energy[k] > out.energy[k - 1] + 1e-12 * std::max(1.0, std::abs(out.energy[k])))
                out.monotone = false;
        }
    }
    out.t_final = out.taus.back();
    return out;
}

// Real-time grid run recording only the density at x0, for compare runs.
struct OracleDensitySeries {
    std::vector<double> times, density;
    bool edge_violation = false;
};

OracleDensitySeries oracle_density_run(const ExperimentConfig& cfg, const GaussianParams& g) {
    const GridSpec spec{cfg.oracle.xmin, cfg.oracle.xmax, cfg.oracle.npoints};
    GridState state = initialize_gaussian(spec, g, cfg.mass, cfg.hbar);
    const SplitOperator stepper(spec, cfg.potential, cfg.oracle.dt, TimeMode::RealTime, cfg.mass,
                                cfg.hbar);

    OracleDensitySeries out;
    const double dt = cfg.oracle.dt;
    const double t_final = cfg.oracle.t_final > 0.0 ? cfg.oracle.t_final : cfg.integration.t_final;
    const long total_steps = std::lround(t_final / dt);
    const int stride = auto_stride(total_steps, cfg.oracle.record_stride, 8000);

    out.times.push_back(0.0);
    out.density.push_back(local_density(state, cfg.x0));
    for (long step = 1; step <= total_steps; ++step) {
        stepper.advance(state);
        if (step % stride == 0 || step == total_steps) {
            out.times.push_back(step * dt);
            out.density.push_back(local_density(state, cfg.x0));
            if (edge_density(state) > kEdgeMonitor) out.edge_violation = true;
        }
    }
    return out;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return (1.0 - w) * ys[lo] + w * ys[hi];
}

void append_setup_warnings(const ExperimentConfig& cfg, const GaussianParams& g,
                           RunSummary& summary) {
    const int max_n = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
    for (const SetupDiagnostic& d :
         validate_setup(cfg.potential, g, cfg.x0, std::max(max_n, 1), SetupThresholds{}, cfg.hbar))
        summary.warnings.push_back(d.message);
}

} // namespace

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows) throw std::invalid_argument("write_csv: ragged columns");

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << "\n";
    char buf[32];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.12e", columns[c][r]);
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path.string());
}

RunSummary run_tunnel(const ExperimentConfig& cfg) {
    const GaussianParams g = resolve_gaussian(cfg);
    const fs::path dir = ensure_output_dir(cfg);

    RunSummary summary;
    summary.experiment = "tunnel";
    summary.config_echo = config_to_json(cfg);
    append_setup_warnings(cfg, g, summary);

    Timer oracle_timer;
    const OracleTunnelSeries oracle = oracle_tunnel_run(cfg, g);
    summary.oracle.wall_ms = oracle_timer.ms();
    summary.oracle.value = oracle.transmitted.back();
    summary.oracle.t_final = oracle.t_final;
    summary.oracle.edge_violation = oracle.edge_violation;
    if (oracle.edge_violation)
        summary.warnings.push_back("oracle: boundary density exceeded the edge monitor");
    write_csv(dir / "oracle.csv", {"t", "density_at_x0", "T_exact"},
              {oracle.times, oracle.density, oracle.transmitted});

    for (int n : cfg.n_list) {
        NRunResult result;
        result.order = n;
        Timer timer;
        try {
            const PhaseJet initial = gaussian_phase_jet(g, cfg.x0, n, cfg.hbar);
            const TrajectoryRecord rec = propagate(initial, cfg.potential, cfg.x0, cfg.integration,
                                                   TimeMode::RealTime, cfg.mass, cfg.hbar);
            const TunnelingSeries series = accumulate_tunneling(rec, cfg.mass, cfg.hbar);
            write_csv(dir / ("zevca_N" + std::to_string(n) + ".csv"),
                      {"t", "density", "current", "cumulative_T"},
                      {series.times, series.density, series.current, series.cumulative});
            result.value = series.cumulative.back();
            result.converged =
                detect_asymptote(series, 0.2 * cfg.integration.t_final, 1e-3).has_value();
            result.blew_up = rec.blew_up;
            result.status = rec.blew_up ? "blowup" : "ok";
            result.rel_error = relative_error(result.value, summary.oracle.value);
        } catch (const std::runtime_error&) {
            result.status = "integration_failure";
            result.blew_up = true;
        }
        result.wall_ms = timer.ms();
        summary.runs.push_back(std::move(result));
    }
    return summary;
}

RunSummary run_eigen(const ExperimentConfig& cfg) {
    const GaussianParams g = resolve_gaussian(cfg);
    const fs::path dir = ensure_output_dir(cfg);

    RunSummary summary;
    summary.experiment = "eigen";
    summary.config_echo = config_to_json(cfg);
    append_setup_warnings(cfg, g, summary);

    Timer oracle_timer;
    const OracleEigenSeries oracle = oracle_eigen_run(cfg, g);
    summary.oracle.wall_ms = oracle_timer.ms();
    summary.oracle.value = oracle.energy.back();
    summary.oracle.t_final = oracle.t_final;
    summary.oracle.energy_monotone = oracle.monotone;
    if (!oracle.monotone)
        summary.warnings.push_back("oracle: Rayleigh energy was not monotonically decreasing");
    write_csv(dir / "oracle.csv", {"tau", "rayleigh_energy"}, {oracle.taus, oracle.energy});

    for (int n : cfg.n_list) {
        NRunResult result;
        result.order = n;
        Timer timer;
        try {
            const PhaseJet initial = gaussian_phase_jet(g, cfg.x0, n, cfg.hbar);
            const TrajectoryRecord rec = propagate(initial, cfg.potential, cfg.x0, cfg.integration,
                                                   TimeMode::ImaginaryTime, cfg.mass, cfg.hbar);
            const EnergySeries series = energy_series(rec, cfg.potential, cfg.mass, cfg.hbar);
            write_csv(dir / ("zevca_N" + std::to_string(n) + ".csv"), {"tau", "E1"},
                      {series.taus, series.estimates});
            const double window = 0.2 * cfg.integration.t_final;
            const auto plateau = detect_plateau(series, window, 1e-3);
            result.converged = plateau.has_value();
            result.value = plateau.value_or(series.estimates.empty() ? 0.0
                                                                     : series.estimates.back());
            result.blew_up = rec.blew_up;
            result.status = rec.blew_up ? "blowup" : "ok";
            result.rel_error = relative_error(result.value, summary.oracle.value);
        } catch (const std::runtime_error&) {
            result.status = "integration_failure";
            result.blew_up = true;
        }
        result.wall_ms = timer.ms();
        summary.runs.push_back(std::move(result));
    }
    return summary;
}

RunSummary run_compare(const ExperimentConfig& cfg) {
    const GaussianParams g = resolve_gaussian(cfg);
    const fs::path dir = ensure_output_dir(cfg);

    RunSummary summary;
    summary.experiment = "compare";
    summary.config_echo = config_to_json(cfg);
    append_setup_warnings(cfg, g, summary);

    Timer oracle_timer;
    const OracleDensitySeries oracle = oracle_density_run(cfg, g);
    summary.oracle.wall_ms = oracle_timer.ms();
    summary.oracle.t_final = oracle.times.back();
    summary.oracle.edge_violation = oracle.edge_violation;
    if (oracle.edge_violation)
        summary.warnings.push_back("oracle: boundary density exceeded the edge monitor");

    std::vector<double> shared_times;
    std::vector<std::vector<double>> zevca_columns;
    std::vector<std::string> header{"t"};
    bool interpolated = false;

    for (int n : cfg.n_list) {
        NRunResult result;
        result.order = n;
        Timer timer;
        try {
            const PhaseJet initial = gaussian_phase_jet(g, cfg.x0, n, cfg.hbar);
            const TrajectoryRecord rec = propagate(initial, cfg.potential, cfg.x0, cfg.integration,
                                                   TimeMode::RealTime, cfg.mass, cfg.hbar);
            std::vector<double> density(rec.jets.size());
            for (std::size_t k = 0; k < rec.jets.size(); ++k)
                density[k] = probability_density(rec.jets[k], cfg.hbar);

            double max_dev = 0.0, sq_sum = 0.0;
            for (std::size_t k = 0; k < rec.times.size(); ++k) {
                const double ref = interpolate(oracle.times, oracle.density, rec.times[k]);
                const double dev = std::abs(density[k] - ref);
                max_dev = std::max(max_dev, dev);
                sq_sum += dev * dev;
            }
            result.value = max_dev;
            result.rms_deviation = std::sqrt(sq_sum / static_cast<double>(rec.times.size()));
            result.blew_up = rec.blew_up;
            result.status = rec.blew_up ? "blowup" : "ok";
            result.converged = !rec.blew_up;

            if (shared_times.empty()) shared_times = rec.times;
            if (rec.times.size() == shared_times.size()) {
                zevca_columns.push_back(std::move(density));
                header.push_back("zevca_density_N" + std::to_string(n));
            }
        } catch (const std::runtime_error&) {
            result.status = "integration_failure";
            result.blew_up = true;
        }
        result.wall_ms = timer.ms();
        summary.runs.push_back(std::move(result));
    }

    // Oracle column resampled onto the trajectory time grid when they differ.
    std::vector<double> oracle_col;
    if (!shared_times.empty()) {
        oracle_col.reserve(shared_times.size());
        for (double t : shared_times) {
            const auto it = std::lower_bound(oracle.times.begin(), oracle.times.end(), t - 1e-12);
            const bool on_grid = it != oracle.times.end() && std::abs(*it - t) < 1e-12;
            if (!on_grid) interpolated = true;
            oracle_col.push_back(interpolate(oracle.times, oracle.density, t));
        }
    }
    if (interpolated) summary.warnings.push_back("compare: oracle densities were interpolated");

    std::vector<std::vector<double>> columns;
    columns.push_back(shared_times);
    for (auto& col : zevca_columns) columns.push_back(std::move(col));
    columns.push_back(std::move(oracle_col));
    header.push_back("oracle_density");
    write_csv(dir / "compare.csv", header, columns);
    return summary;
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::Tunnel: return run_tunnel(cfg);
        case ExperimentKind::Eigen: return run_eigen(cfg);
        case ExperimentKind::Compare: return run_compare(cfg);
    }
    throw ConfigError(0, "unknown experiment kind");
}

nlohmann::json summary_to_json(const RunSummary& summary) {
    nlohmann::json j;
    j["schema_version"] = summary.schema_version;
    j["experiment"] = summary.experiment;
    j["deterministic"] = summary.deterministic_output;
    j["config"] = summary.config_echo;

    nlohmann::json oracle;
    oracle["value"] = summary.oracle.value;
    oracle["t_final"] = summary.oracle.t_final;
    oracle["edge_violation"] = summary.oracle.edge_violation;
    oracle["energy_monotone"] = summary.oracle.energy_monotone;
    if (!summary.deterministic_output) oracle["wall_ms"] = summary.oracle.wall_ms;
    j["oracle"] = std::move(oracle);

    j["runs"] = nlohmann::json::array();
    for (const NRunResult& r : summary.runs) {
        nlohmann::json run;
        run["n"] = r.order;
        run["value"] = r.value;
        run["rel_error"] = r.rel_error;
        run["converged"] = r.converged;
        run["blowup"] = r.blew_up;
        run["status"] = r.status;
        if (r.rms_deviation) run["rms_deviation"] = *r.rms_deviation;
        if (!summary.deterministic_output) run["wall_ms"] = r.wall_ms;
        j["runs"].push_back(std::move(run));
    }
    j["warnings"] = summary.warnings;
    return j;
}

void write_summary_json(const RunSummary& summary, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << summary_to_json(summary).dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

} // namespace zevca
