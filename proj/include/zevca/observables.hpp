#pragma once

// Physical quantities derived from a jet trajectory: local density and
// probability current, cumulative tunneling probability, the algebraic
// ground-state energy estimator for imaginary-time runs, and setup checks.

#include <optional>
#include <string>

#include "zevca/phase_jet.hpp"
#include "zevca/potential.hpp"
#include "zevca/propagator.hpp"

namespace zevca {

// |psi|^2 = exp(-2 Im S_0 / hbar); overflow is clamped to DBL_MAX.
double probability_density(const PhaseJet& jet, double hbar);

// J = (|psi|^2 / m) Re S_1, equal to (hbar/m) Im(psi* psi_x) under the ansatz.
// Densities below the nodal guard (1e-300) report zero current.
double probability_current(const PhaseJet& jet, double mass, double hbar);

struct TunnelingSeries {
    std::vector<double> times;
    std::vector<double> density;    // |psi(x0,t)|^2
    std::vector<double> current;    // J(x0,t)
    std::vector<double> cumulative; // T(t), running trapezoid of the current
    std::optional<double> asymptote;
    bool converged = false;
    int guard_events = 0;           // samples where the nodal/overflow guard fired
};

// T(t_k) by trapezoidal quadrature of J over the recorded times. The record
// must come from a real-time run at the intended flux plane.
TunnelingSeries accumulate_tunneling(const TrajectoryRecord& rec, double mass, double hbar);

// Returns T at the last time when the trailing window (a time span measured
// back from the end) varies by less than tol relative to the terminal value.
std::optional<double> detect_asymptote(const TunnelingSeries& series, double window, double tol);

struct EnergySeries {
    std::vector<double> taus;
    std::vector<double> estimates; // E_1(tau)
    std::optional<double> plateau;
    bool converged = false;
    double window_used = 0.0;
};

// Algebraic ground-state estimator on an imaginary-time jet:
//   E_1 = -Re[(i hbar / 2m) S_2 - (1/2m) S_1^2 - V(x0)].
// The prefactor convention is fixed by the harmonic closed form (exact ground
// state gives hbar*omega/2); see the README discussion of the tau scaling.
double energy_estimate(const PhaseJet& jet, double v0, double mass, double hbar);

// E_1(tau) along an imaginary-time trajectory; v0 is taken from the potential
// at the record's position.
EnergySeries energy_series(const TrajectoryRecord& rec, const PotentialSpec& potential,
                           double mass, double hbar);

std::optional<double> detect_plateau(const EnergySeries& series, double window, double tol);

struct SetupThresholds {
    double vn_floor = 1e-8;       // max_n |V_n(x0)|, n = 1..N, below this warns
    double density_floor = 1e-12; // |psi(x0,0)|^2 below this warns
};

struct SetupDiagnostic {
    enum class Kind {
        FlatPotential,    // no potential derivative at x0 is significantly nonzero
        NegligibleDensity // initial wavefunction at x0 is negligibly small
    };
    Kind kind;
    double value = 0.0;
    std::string message;
};

// Checks the two fixed-trajectory restrictions on the choice of x(0). Returns
// structured warnings; never blocks a run.
std::vector<SetupDiagnostic> validate_setup(const PotentialSpec& p, const GaussianParams& g,
                                            double x0, int order, const SetupThresholds& thresholds,
                                            double hbar);

} // namespace zevca
