#include "zevca/grid_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zevca {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void validate(const GridSpec& spec) {
    if (!(spec.xmax > spec.xmin)) throw std::invalid_argument("grid: xmax must exceed xmin");
    if (spec.npoints < 256 || !power_of_two(spec.npoints))
        throw std::invalid_argument("grid: npoints must be a power of two >= 256");
}

// Wavenumbers in FFT ordering: k_j = 2 pi j / L for j < n/2, negative branch after.
double wavenumber(int j, int n, double box_length) {
    const int shifted = j < n / 2 ? j : j - n;
    return 2.0 * std::numbers::pi * shifted / box_length;
}

void renormalize(GridState& s) {
    double sum = 0.0;
    for (const cplx& z : s.psi) sum += std::norm(z);
    const double norm = std::sqrt(sum * s.dx());
    if (norm == 0.0) throw std::runtime_error("grid: wavefunction collapsed to zero");
    const double inv = 1.0 / norm;
    for (cplx& z : s.psi) z *= inv;
}

} // namespace

GridState initialize_gaussian(const GridSpec& spec, const GaussianParams& g, double mass,
                              double hbar) {
    validate(spec);
    zevca::validate(g);
    if (!(mass > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("grid: mass and hbar must be > 0");

    GridState s;
    s.xmin = spec.xmin;
    s.xmax = spec.xmax;
    s.npoints = spec.npoints;
    s.mass = mass;
    s.hbar = hbar;
    s.psi.resize(static_cast<std::size_t>(spec.npoints));

    double peak = 0.0;
    for (int i = 0; i < s.npoints; ++i) {
        const double dxc = s.x(i) - g.xc;
        // psi = exp[-alpha0 dx^2 + i pc dx / hbar + i gamma0 / hbar]; complex
        // gamma0 contributes both a phase and a real normalization factor.
        const cplx exponent = cplx{-g.alpha0 * dxc * dxc, g.pc * dxc / hbar} +
                              cplx{0.0, 1.0} * g.gamma0 / hbar;
        const cplx value = std::exp(exponent);
        s.psi[static_cast<std::size_t>(i)] = value;
        peak = std::max(peak, std::abs(value));
    }

    const double edge = std::max(std::abs(s.psi.front()), std::abs(s.psi.back()));
    if (edge > 1e-12 * peak)
        throw std::runtime_error("grid: initial wavepacket is not contained in the box");

    renormalize(s);
    return s;
}

double grid_norm(const GridState& s) {
    double sum = 0.0;
    for (const cplx& z : s.psi) sum += std::norm(z);
    return std::sqrt(sum * s.dx());
}

double grid_mean_x(const GridState& s) {
    double sum = 0.0, w = 0.0;
    for (int i = 0; i < s.npoints; ++i) {
        const double d = std::norm(s.psi[static_cast<std::size_t>(i)]);
        sum += d * s.x(i);
        w += d;
    }
    return sum / w;
}

double grid_variance_x(const GridState& s) {
    const double mean = grid_mean_x(s);
    double sum = 0.0, w = 0.0;
    for (int i = 0; i < s.npoints; ++i) {
        const double d = std::norm(s.psi[static_cast<std::size_t>(i)]);
        const double r = s.x(i) - mean;
        sum += d * r * r;
        w += d;
    }
    return sum / w;
}

SplitOperator::SplitOperator(const GridSpec& spec, const PotentialSpec& potential, double dt,
                             TimeMode mode, double mass, double hbar)
    : dt_(dt), mode_(mode), fft_(spec.npoints) {
    validate(spec);
    zevca::validate(potential);
    if (!(dt > 0.0)) throw std::invalid_argument("split operator: dt must be > 0");
    if (!(mass > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("split operator: mass and hbar must be > 0");

    const int n = spec.npoints;
    const double box = spec.xmax - spec.xmin;
    const double dx = box / n;

    if (mode == TimeMode::RealTime) {
        // Aliasing guard: the kinetic phase advance of the Nyquist mode per
        // step must stay below pi.
        const double k_nyquist = std::numbers::pi / dx;
        const double phase = hbar * k_nyquist * k_nyquist * dt / (2.0 * mass);
        if (phase >= std::numbers::pi)
            throw std::invalid_argument(
                "split operator: dt too large, Nyquist kinetic phase per step >= pi");
    }

    half_potential_.resize(static_cast<std::size_t>(n));
    kinetic_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double v = potential_value(potential, spec.xmin + i * dx);
        half_potential_[static_cast<std::size_t>(i)] =
            mode == TimeMode::RealTime ? std::exp(cplx{0.0, -v * dt / (2.0 * hbar)})
                                       : cplx{std::exp(-v * dt / 4.0), 0.0};
    }
    for (int j = 0; j < n; ++j) {
        const double k = wavenumber(j, n, box);
        const double t_kin = hbar * hbar * k * k / (2.0 * mass);
        kinetic_[static_cast<std::size_t>(j)] =
            mode == TimeMode::RealTime ? std::exp(cplx{0.0, -t_kin * dt / hbar})
                                       : cplx{std::exp(-t_kin * dt / 2.0), 0.0};
    }
}

void SplitOperator::advance(GridState& s) const {
    if (static_cast<int>(s.psi.size()) != fft_.size())
        throw std::invalid_argument("split operator: state size does not match plan");
    const std::size_t n = s.psi.size();
    for (std::size_t i = 0; i < n; ++i) s.psi[i] *= half_potential_[i];
    fft_.forward(s.psi);
    for (std::size_t i = 0; i < n; ++i) s.psi[i] *= kinetic_[i];
    fft_.inverse(s.psi);
    for (std::size_t i = 0; i < n; ++i) s.psi[i] *= half_potential_[i];
    if (mode_ == TimeMode::ImaginaryTime) renormalize(s);
}

void split_operator_step(GridState& s, const PotentialSpec& potential, double dt, TimeMode mode) {
    const GridSpec spec{s.xmin, s.xmax, s.npoints};
    SplitOperator(spec, potential, dt, mode, s.mass, s.hbar).advance(s);
}

double transmitted_probability(const GridState& s, double xcut) {
    if (xcut < s.xmin || xcut > s.xmax)
        throw std::invalid_argument("transmitted_probability: cut lies outside the grid");
    const double dx = s.dx();
    double sum = 0.0;
    for (int i = 0; i < s.npoints; ++i) {
        const double xi = s.x(i);
        if (xi > xcut + 1e-9 * dx)
            sum += std::norm(s.psi[static_cast<std::size_t>(i)]);
        else if (std::abs(xi - xcut) <= 1e-9 * dx)
            sum += 0.5 * std::norm(s.psi[static_cast<std::size_t>(i)]);
    }
    double integral = sum * dx;
    // Euler-Maclaurin endpoint term: the half-weighted sum is the trapezoid
    // rule on [xcut, inf), and integral = trapezoid + (dx^2/12) rho'(xcut) up
    // to O(dx^4) (the far end contributes nothing for a decayed density). The
    // gradient at the cut is O(1) whenever the packet straddles it.
    const int icut = static_cast<int>(std::lround((xcut - s.xmin) / dx));
    if (icut >= 1 && icut + 1 < s.npoints && std::abs(s.x(icut) - xcut) <= 1e-9 * dx) {
        const double grad = (std::norm(s.psi[static_cast<std::size_t>(icut + 1)]) -
                             std::norm(s.psi[static_cast<std::size_t>(icut - 1)])) /
                            (2.0 * dx);
        integral += dx * dx / 12.0 * grad;
    }
    return integral;
}

double rayleigh_energy(const GridState& s, const PotentialSpec& potential) {
    double v_sum = 0.0, w = 0.0;
    for (int i = 0; i < s.npoints; ++i) {
        const double d = std::norm(s.psi[static_cast<std::size_t>(i)]);
        v_sum += d * potential_value(potential, s.x(i));
        w += d;
    }

    std::vector<cplx> spectrum = s.psi;
    Fft(s.npoints).forward(spectrum);
    const double box = s.xmax - s.xmin;
    double t_sum = 0.0, spec_w = 0.0;
    for (int j = 0; j < s.npoints; ++j) {
        const double d = std::norm(spectrum[static_cast<std::size_t>(j)]);
        const double k = wavenumber(j, s.npoints, box);
        t_sum += d * s.hbar * s.hbar * k * k / (2.0 * s.mass);
        spec_w += d;
    }
    return v_sum / w + t_sum / spec_w;
}

double local_density(const GridState& s, double x0) {
    if (x0 < s.xmin || x0 > s.xmax)
        throw std::invalid_argument("local_density: point lies outside the grid");
    const double dx = s.dx();
    const double u = (x0 - s.xmin) / dx;
    const int i0 = std::min(static_cast<int>(u), s.npoints - 1);
    const double frac = u - i0;
    const double d0 = std::norm(s.psi[static_cast<std::size_t>(i0)]);
    if (frac < 1e-12 || i0 + 1 >= s.npoints) return d0;
    const double d1 = std::norm(s.psi[static_cast<std::size_t>(i0 + 1)]);
    return (1.0 - frac) * d0 + frac * d1;
}

double edge_density(const GridState& s) {
    return std::max(std::norm(s.psi.front()), std::norm(s.psi.back())) * s.dx();
}

} // namespace zevca
