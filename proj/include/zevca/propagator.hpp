#pragma once

// ODE driver for the phase-derivative hierarchy along the zero-velocity
// characteristic. The potential stack V_0..V_N is evaluated once at x(0) and
// reused for the whole run; the characteristic never moves.

#include "zevca/phase_jet.hpp"
#include "zevca/potential.hpp"

namespace zevca {

enum class Scheme {
    RK4, // classic fixed-step Runge-Kutta
    RK45 // Dormand-Prince 5(4) with adaptive step control
};

struct IntegrationConfig {
    double dt = 1e-3;        // step in t (real mode) or tau (imaginary mode)
    double t_final = 1.0;
    Scheme scheme = Scheme::RK4;
    double abs_tol = 1e-10;  // adaptive only
    double rel_tol = 1e-10;  // adaptive only
    int record_stride = 1;   // record every stride-th accepted step
};

void validate(const IntegrationConfig& cfg);

// Time series of the full jet at one fixed position. A non-finite jet ends the
// record early with the blow-up flag set; everything recorded before it is
// kept. High-N runs diverging at long times is expected behavior worth keeping.
struct TrajectoryRecord {
    TimeMode mode = TimeMode::RealTime;
    double x0 = 0.0;
    std::vector<double> times;
    std::vector<PhaseJet> jets;       // aligned with times
    std::vector<double> vstack;       // V_0..V_N used for the run
    bool blew_up = false;
    double blowup_time = 0.0;
};

// One fixed-size step of the selected scheme applied to the hierarchy.
PhaseJet step(const PhaseJet& jet, std::span<const double> vstack, const IntegrationConfig& cfg,
              double mass, double hbar, TimeMode mode);

// Advance the jet from t=0 to cfg.t_final, recording t=0, every stride-th
// accepted step, and the final time. Throws on invalid configuration; a
// blow-up truncates the record instead of throwing. Adaptive step-rejection
// exhaustion throws with the last good time in the message.
TrajectoryRecord propagate(const PhaseJet& initial, const PotentialSpec& potential, double x0,
                           const IntegrationConfig& cfg, TimeMode mode, double mass, double hbar);

} // namespace zevca
