#include "zevca/observables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace zevca {

namespace {

constexpr double kNodalGuard = 1e-300;

double density_from_s0(cplx s0, double hbar) {
    const double arg = -2.0 * s0.imag() / hbar;
    const double d = std::exp(arg);
    if (std::isinf(d)) return std::numeric_limits<double>::max();
    return d;
}

} // namespace

double probability_density(const PhaseJet& jet, double hbar) {
    if (!jet.is_finite())
        throw std::domain_error("probability_density: jet has non-finite coefficients");
    return density_from_s0(jet.coeffs[0], hbar);
}

double probability_current(const PhaseJet& jet, double mass, double hbar) {
    if (!(mass > 0.0)) throw std::invalid_argument("probability_current: mass must be > 0");
    const double d = probability_density(jet, hbar);
    if (d < kNodalGuard) return 0.0;
    return d * jet.s(1).real() / mass;
}

TunnelingSeries accumulate_tunneling(const TrajectoryRecord& rec, double mass, double hbar) {
    if (rec.mode != TimeMode::RealTime)
        throw std::invalid_argument("accumulate_tunneling: record must come from a real-time run");
    TunnelingSeries series;
    const std::size_t n = rec.jets.size();
    series.times = rec.times;
    series.density.resize(n);
    series.current.resize(n);
    series.cumulative.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double d = probability_density(rec.jets[k], hbar);
        series.density[k] = d;
        if (d < kNodalGuard || d == std::numeric_limits<double>::max()) {
            series.current[k] = 0.0;
            ++series.guard_events;
        } else {
            series.current[k] = d * rec.jets[k].s(1).real() / mass;
        }
        if (k == 0) {
            series.cumulative[k] = 0.0;
        } else {
            const double dt = series.times[k] - series.times[k - 1];
            series.cumulative[k] = series.cumulative[k - 1] +
                                   0.5 * (series.current[k] + series.current[k - 1]) * dt;
        }
    }
    return series;
}

std::optional<double> detect_asymptote(const TunnelingSeries& series, double window, double tol) {
    if (series.cumulative.empty()) return std::nullopt;
    const double t_end = series.times.back();
    const double terminal = series.cumulative.back();
    double max_dev = 0.0;
    for (std::size_t k = series.times.size(); k-- > 0;) {
        if (series.times[k] < t_end - window) break;
        max_dev = std::max(max_dev, std::abs(series.cumulative[k] - terminal));
    }
    constexpr double kFloor = 1e-12;
    if (max_dev < tol * std::max(std::abs(terminal), kFloor)) return terminal;
    return std::nullopt;
}

double energy_estimate(const PhaseJet& jet, double v0, double mass, double hbar) {
    if (!(mass > 0.0)) throw std::invalid_argument("energy_estimate: mass must be > 0");
    if (!jet.is_finite())
        throw std::domain_error("energy_estimate: jet has non-finite coefficients");
    const cplx s1 = jet.s(1);
    const cplx s2 = jet.s(2);
    const cplx rhs = cplx{0.0, hbar / (2.0 * mass)} * s2 - s1 * s1 / (2.0 * mass) - v0;
    return -rhs.real();
}

EnergySeries energy_series(const TrajectoryRecord& rec, const PotentialSpec& potential,
                           double mass, double hbar) {
    if (rec.mode != TimeMode::ImaginaryTime)
        throw std::invalid_argument("energy_series: record must come from an imaginary-time run");
    const double v0 = potential_value(potential, rec.x0);
    EnergySeries series;
    series.taus = rec.times;
    series.estimates.reserve(rec.jets.size());
    for (const PhaseJet& jet : rec.jets)
        series.estimates.push_back(energy_estimate(jet, v0, mass, hbar));
    return series;
}

std::optional<double> detect_plateau(const EnergySeries& series, double window, double tol) {
    if (series.estimates.empty()) return std::nullopt;
    const double t_end = series.taus.back();
    const double terminal = series.estimates.back();
    double max_dev = 0.0;
    for (std::size_t k = series.taus.size(); k-- > 0;) {
        if (series.taus[k] < t_end - window) break;
        max_dev = std::max(max_dev, std::abs(series.estimates[k] - terminal));
    }
    constexpr double kFloor = 1e-12;
    if (max_dev < tol * std::max(std::abs(terminal), kFloor)) return terminal;
    return std::nullopt;
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

} // namespace

std::vector<SetupDiagnostic> validate_setup(const PotentialSpec& p, const GaussianParams& g,
                                            double x0, int order, const SetupThresholds& thresholds,
                                            double hbar) {
    std::vector<SetupDiagnostic> diags;

    const std::vector<double> vstack = derivative_stack(p, x0, order);
    double max_vn = 0.0;
    for (std::size_t n = 1; n < vstack.size(); ++n) max_vn = std::max(max_vn, std::abs(vstack[n]));
    if (max_vn < thresholds.vn_floor) {
        diags.push_back({SetupDiagnostic::Kind::FlatPotential, max_vn,
                         "no potential derivative V_1..V_N at x0 exceeds " + sci(thresholds.vn_floor) +
                             "; the fixed trajectory cannot capture the potential's surroundings"});
    }

    const PhaseJet jet = gaussian_phase_jet(g, x0, std::max(order, 2), hbar);
    const double d = probability_density(jet, hbar);
    if (d < thresholds.density_floor) {
        diags.push_back({SetupDiagnostic::Kind::NegligibleDensity, d,
                         "|psi(x0,0)|^2 = " + sci(d) +
                             " is negligibly small at x0; the initial conditions carry little "
                             "information about the wavepacket"});
    }
    return diags;
}

} // namespace zevca
