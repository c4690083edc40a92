#include "zevca/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace zevca {

namespace {

using Vec = std::vector<cplx>;

bool all_finite(const Vec& y) {
    for (const cplx& z : y)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

// Workspace shared by the steppers so the hot loop does not allocate.
struct Work {
    Vec k1, k2, k3, k4, k5, k6, k7, tmp, y5, y4;

    explicit Work(std::size_t n)
        : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n), y4(n) {}
};

struct Rhs {
    std::span<const double> vstack;
    double mass;
    double hbar;
    TimeMode mode;

    void operator()(const Vec& y, Vec& dy) const {
        hierarchy_rhs_into(y, vstack, mass, hbar, mode, dy);
    }
};

void rk4_step(const Rhs& f, const Vec& y, double h, Work& w, Vec& out) {
    const std::size_t n = y.size();
    f(y, w.k1);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
    f(w.tmp, w.k2);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
    f(w.tmp, w.k3);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * w.k3[i];
    f(w.tmp, w.k4);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + (h / 6.0) * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

// Dormand-Prince 5(4) tableau; the node coefficients are not needed because
// the hierarchy is autonomous (V_n are constants of the motion).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

// One 5th-order step; fills w.y5 (solution) and w.y4 (embedded 4th order).
void dp5_step(const Rhs& f, const Vec& y, double h, Work& w) {
    const std::size_t n = y.size();
    f(y, w.k1);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * a21 * w.k1[i];
    f(w.tmp, w.k2);
    for (std::size_t i = 0; i < n; ++i) w.tmp[i] = y[i] + h * (a31 * w.k1[i] + a32 * w.k2[i]);
    f(w.tmp, w.k3);
    for (std::size_t i = 0; i < n; ++i)
        w.tmp[i] = y[i] + h * (a41 * w.k1[i] + a42 * w.k2[i] + a43 * w.k3[i]);
    f(w.tmp, w.k4);
    for (std::size_t i = 0; i < n; ++i)
        w.tmp[i] = y[i] + h * (a51 * w.k1[i] + a52 * w.k2[i] + a53 * w.k3[i] + a54 * w.k4[i]);
    f(w.tmp, w.k5);
    for (std::size_t i = 0; i < n; ++i)
        w.tmp[i] = y[i] + h * (a61 * w.k1[i] + a62 * w.k2[i] + a63 * w.k3[i] + a64 * w.k4[i] +
                               a65 * w.k5[i]);
    f(w.tmp, w.k6);
    for (std::size_t i = 0; i < n; ++i)
        w.y5[i] = y[i] + h * (b1 * w.k1[i] + b3 * w.k3[i] + b4 * w.k4[i] + b5 * w.k5[i] +
                              b6 * w.k6[i]);
    f(w.y5, w.k7);
    for (std::size_t i = 0; i < n; ++i)
        w.y4[i] = y[i] + h * (e1 * w.k1[i] + e3 * w.k3[i] + e4 * w.k4[i] + e5 * w.k5[i] +
                              e6 * w.k6[i] + e7 * w.k7[i]);
}

double error_norm(const Vec& y5, const Vec& y4, const Vec& y0, double atol, double rtol) {
    double sum = 0.0;
    for (std::size_t i = 0; i < y5.size(); ++i) {
        const double scale =
            atol + rtol * std::max(std::abs(y0[i]), std::abs(y5[i]));
        const double err = std::abs(y5[i] - y4[i]) / scale;
        sum += err * err;
    }
    return std::sqrt(sum / static_cast<double>(y5.size()));
}

} // namespace

void validate(const IntegrationConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("integration: dt must be > 0");
    if (!(cfg.t_final > 0.0)) throw std::invalid_argument("integration: t_final must be > 0");
    if (!(cfg.dt < cfg.t_final)) throw std::invalid_argument("integration: dt must be < t_final");
    if (cfg.record_stride < 1)
        throw std::invalid_argument("integration: record_stride must be >= 1");
    if (cfg.scheme == Scheme::RK45 && (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)))
        throw std::invalid_argument("integration: adaptive tolerances must be > 0");
}

PhaseJet step(const PhaseJet& jet, std::span<const double> vstack, const IntegrationConfig& cfg,
              double mass, double hbar, TimeMode mode) {
    if (vstack.size() != jet.coeffs.size())
        throw std::invalid_argument("step: vstack length must equal jet order + 1");
    if (!(mass > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("step: mass and hbar must be > 0");
    Work w(jet.coeffs.size());
    const Rhs f{vstack, mass, hbar, mode};
    PhaseJet out = jet;
    if (cfg.scheme == Scheme::RK4) {
        rk4_step(f, jet.coeffs, cfg.dt, w, out.coeffs);
    } else {
        dp5_step(f, jet.coeffs, cfg.dt, w);
        out.coeffs = w.y5;
    }
    out.time = jet.time + cfg.dt;
    if (!out.is_finite()) throw std::domain_error("step: produced a non-finite jet");
    return out;
}

TrajectoryRecord propagate(const PhaseJet& initial, const PotentialSpec& potential, double x0,
                           const IntegrationConfig& cfg, TimeMode mode, double mass, double hbar) {
    validate(cfg);
    if (!(mass > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("propagate: mass and hbar must be > 0");
    if (initial.position != x0)
        throw std::invalid_argument("propagate: initial jet position must equal x0");
    if (!initial.is_finite())
        throw std::domain_error("propagate: initial jet has non-finite coefficients");

    TrajectoryRecord rec;
    rec.mode = mode;
    rec.x0 = x0;
    rec.vstack = derivative_stack(potential, x0, initial.order);

    const Rhs f{rec.vstack, mass, hbar, mode};
    Work w(initial.coeffs.size());
    Vec y = initial.coeffs;
    Vec ynext(y.size());
    double t = 0.0;

    const auto record = [&](double time) {
        PhaseJet jet = initial;
        jet.coeffs = y;
        jet.time = time;
        rec.times.push_back(time);
        rec.jets.push_back(std::move(jet));
    };
    record(0.0);

    const double t_end = cfg.t_final;
    const double tiny = 1e-12 * t_end;

    if (cfg.scheme == Scheme::RK4) {
        long step_count = 0;
        while (t < t_end - tiny) {
            const double h = std::min(cfg.dt, t_end - t);
            rk4_step(f, y, h, w, ynext);
            if (!all_finite(ynext)) {
                rec.blew_up = true;
                rec.blowup_time = t + h;
                return rec;
            }
            y.swap(ynext);
            t += h;
            ++step_count;
            if (step_count % cfg.record_stride == 0 || t >= t_end - tiny) record(t);
        }
        return rec;
    }

    // Adaptive Dormand-Prince. Step-size control: standard 0.9 * err^(-1/5)
    // with growth clamped to [0.2, 5].
    double h = std::min(cfg.dt, t_end);
    const double h_min = std::max(1e-14, 1e-12 * t_end);
    long accepted = 0;
    int consecutive_rejects = 0;
    while (t < t_end - tiny) {
        h = std::min(h, t_end - t);
        dp5_step(f, y, h, w);
        if (!all_finite(w.y5)) {
            rec.blew_up = true;
            rec.blowup_time = t + h;
            return rec;
        }
        const double err = error_norm(w.y5, w.y4, y, cfg.abs_tol, cfg.rel_tol);
        if (err <= 1.0) {
            t += h;
            y = w.y5;
            ++accepted;
            consecutive_rejects = 0;
            if (accepted % cfg.record_stride == 0 || t >= t_end - tiny) record(t);
            const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            ++consecutive_rejects;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
            if (h < h_min || consecutive_rejects > 200)
                throw std::runtime_error("propagate: adaptive step control exhausted at t = " +
                                         std::to_string(t));
        }
    }
    return rec;
}

} // namespace zevca
