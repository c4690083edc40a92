#pragma once

// Independent exact-quantum reference: split-operator Fourier propagation of
// the wavefunction on a uniform grid, in real and imaginary time. Used to
// validate the single-trajectory results; shares no code path with them.

#include "zevca/fft.hpp"
#include "zevca/phase_jet.hpp"
#include "zevca/potential.hpp"

namespace zevca {

struct GridSpec {
    double xmin = -12.0;
    double xmax = 12.0;
    int npoints = 4096; // power of two, >= 256
};

struct GridState {
    double xmin = 0.0;
    double xmax = 0.0;
    int npoints = 0;
    std::vector<cplx> psi;
    double mass = 1.0;
    double hbar = 1.0;

    double dx() const { return (xmax - xmin) / npoints; }
    double x(int i) const { return xmin + i * dx(); }
};

// Sampled, numerically normalized Gaussian wavepacket. Throws if the packet is
// not well contained (edge magnitude above 1e-12 of the peak).
GridState initialize_gaussian(const GridSpec& spec, const GaussianParams& g, double mass,
                              double hbar);

double grid_norm(const GridState& s);          // sqrt(integral |psi|^2 dx)
double grid_mean_x(const GridState& s);        // <x>
double grid_variance_x(const GridState& s);    // <(x - <x>)^2>

// Strang-split stepper with precomputed phase tables. Real time applies
// exp(-iV dt/2h) . exp(-ih k^2 dt/2m) . exp(-iV dt/2h); imaginary time applies
// the same splitting of exp(-H dtau/2) (tau conjugate to energy, t = -(i hbar/2) tau)
// and renormalizes after each step.
class SplitOperator {
  public:
    SplitOperator(const GridSpec& spec, const PotentialSpec& potential, double dt, TimeMode mode,
                  double mass, double hbar);

    void advance(GridState& s) const;
    double dt() const { return dt_; }

  private:
    double dt_;
    TimeMode mode_;
    Fft fft_;
    std::vector<cplx> half_potential_;
    std::vector<cplx> kinetic_;
};

// Convenience single step (builds the phase tables each call).
void split_operator_step(GridState& s, const PotentialSpec& potential, double dt, TimeMode mode);

// Integral of |psi|^2 over x > xcut: half-weighted node sum (trapezoid on the
// half line) with an Euler-Maclaurin endpoint correction when the cut sits on
// a node.
double transmitted_probability(const GridState& s, double xcut);

// <psi|H|psi> / <psi|psi> with the kinetic part evaluated spectrally.
double rayleigh_energy(const GridState& s, const PotentialSpec& potential);

// |psi(x0)|^2 by linear interpolation between the neighboring nodes.
double local_density(const GridState& s, double x0);

// max(|psi|^2 dx) over the two edge nodes; used to confirm that a run ended
// before boundary wrap-around.
double edge_density(const GridState& s);

} // namespace zevca
