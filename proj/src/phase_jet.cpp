#include "zevca/phase_jet.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zevca {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Pascal triangle rows 0..kMaxOrder+2. All entries are integers below 2^53,
// so the table is exact.
const std::vector<std::vector<double>>& binomial_table() {
    static const std::vector<std::vector<double>> table = [] {
        std::vector<std::vector<double>> rows(kMaxOrder + 3);
        for (int n = 0; n < static_cast<int>(rows.size()); ++n) {
            rows[n].resize(static_cast<std::size_t>(n) + 1, 1.0);
            for (int k = 1; k < n; ++k)
                rows[n][k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        return rows;
    }();
    return table;
}

} // namespace

bool PhaseJet::is_finite() const {
    for (const cplx& c : coeffs)
        if (!finite(c)) return false;
    return true;
}

PhaseJet make_phase_jet(int order, double position, double time) {
    if (order < 0 || order > kMaxOrder)
        throw std::invalid_argument("phase jet order must be in [0, " +
                                    std::to_string(kMaxOrder) + "]");
    PhaseJet jet;
    jet.order = order;
    jet.coeffs.assign(static_cast<std::size_t>(order) + 1, cplx{0.0, 0.0});
    jet.position = position;
    jet.time = time;
    return jet;
}

cplx GaussianParams::normalization_gamma(double alpha0, double hbar) {
    return cplx{0.0, -hbar / 4.0} * std::log(2.0 * alpha0 / std::numbers::pi);
}

GaussianParams GaussianParams::normalized(double alpha0, double xc, double pc, double hbar) {
    GaussianParams g;
    g.alpha0 = alpha0;
    g.xc = xc;
    g.pc = pc;
    g.gamma0 = normalization_gamma(alpha0, hbar);
    validate(g);
    return g;
}

void validate(const GaussianParams& g) {
    if (!(g.alpha0 > 0.0))
        throw std::invalid_argument("gaussian alpha0 must be > 0");
    if (!std::isfinite(g.xc) || !std::isfinite(g.pc) || !finite(g.gamma0))
        throw std::invalid_argument("gaussian parameters must be finite");
}

double binomial(int n, int k) {
    const auto& table = binomial_table();
    if (n < 0 || n >= static_cast<int>(table.size()) || k < 0 || k > n)
        throw std::invalid_argument("binomial index out of range");
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

cplx leibniz_square(const PhaseJet& jet, int n) {
    if (n < 0) throw std::invalid_argument("leibniz_square: n must be >= 0");
    if (n > jet.order) throw std::invalid_argument("leibniz_square: n exceeds jet order");
    const auto& row = binomial_table()[static_cast<std::size_t>(n)];
    // Terms with S_{j+1} or S_{n-j+1} above the order vanish.
    const int jlo = std::max(0, n - jet.order + 1);
    const int jhi = std::min(n, jet.order - 1);
    cplx sum{0.0, 0.0};
    for (int j = jlo; j <= jhi; ++j)
        sum += row[static_cast<std::size_t>(j)] * jet.coeffs[static_cast<std::size_t>(j + 1)] *
               jet.coeffs[static_cast<std::size_t>(n - j + 1)];
    return sum;
}

void hierarchy_rhs_into(std::span<const cplx> coeffs, std::span<const double> vstack,
                        double mass, double hbar, TimeMode mode, std::span<cplx> out) {
    const int order = static_cast<int>(coeffs.size()) - 1;
    const auto& table = binomial_table();
    const double inv_2m = 1.0 / (2.0 * mass);
    const cplx quantum{0.0, hbar * inv_2m};          // i hbar / 2m
    const cplx tau_factor{0.0, -hbar / 2.0};         // dt/dtau for imaginary mode
    for (int n = 0; n <= order; ++n) {
        const auto& row = table[static_cast<std::size_t>(n)];
        const int jlo = std::max(0, n - order + 1);
        const int jhi = std::min(n, order - 1);
        cplx leib{0.0, 0.0};
        for (int j = jlo; j <= jhi; ++j)
            leib += row[static_cast<std::size_t>(j)] * coeffs[static_cast<std::size_t>(j + 1)] *
                    coeffs[static_cast<std::size_t>(n - j + 1)];
        cplx rhs = -inv_2m * leib - vstack[static_cast<std::size_t>(n)];
        if (n + 2 <= order) rhs += quantum * coeffs[static_cast<std::size_t>(n + 2)];
        out[static_cast<std::size_t>(n)] = (mode == TimeMode::ImaginaryTime) ? tau_factor * rhs : rhs;
    }
}

std::vector<cplx> hierarchy_rhs(const PhaseJet& jet, std::span<const double> vstack,
                                double mass, double hbar, TimeMode mode) {
    if (vstack.size() != jet.coeffs.size())
        throw std::invalid_argument("hierarchy_rhs: vstack length must equal jet order + 1");
    if (!(mass > 0.0) || !(hbar > 0.0))
        throw std::invalid_argument("hierarchy_rhs: mass and hbar must be > 0");
    if (!jet.is_finite())
        throw std::domain_error("hierarchy_rhs: jet has non-finite coefficients");
    for (double v : vstack)
        if (!std::isfinite(v)) throw std::domain_error("hierarchy_rhs: non-finite potential stack");
    std::vector<cplx> out(jet.coeffs.size());
    hierarchy_rhs_into(jet.coeffs, vstack, mass, hbar, mode, out);
    return out;
}

PhaseJet gaussian_phase_jet(const GaussianParams& g, double x0, int order, double hbar) {
    validate(g);
    PhaseJet jet = make_phase_jet(order, x0, 0.0);
    const double dx = x0 - g.xc;
    const cplx i2ah{0.0, 2.0 * g.alpha0 * hbar};
    jet.coeffs[0] = cplx{0.0, g.alpha0 * hbar} * dx * dx + g.pc * dx + g.gamma0;
    if (order >= 1) jet.coeffs[1] = i2ah * dx + g.pc;
    if (order >= 2) jet.coeffs[2] = i2ah;
    return jet;
}

ReconstructedPsi reconstruct_amplitude(const PhaseJet& jet, double hbar) {
    if (!jet.is_finite())
        throw std::domain_error("reconstruct_amplitude: jet has non-finite coefficients");
    ReconstructedPsi result;
    const cplx s0 = jet.coeffs[0];
    // exp(i S_0 / hbar) has magnitude exp(-Im S_0 / hbar).
    double log_mag = -s0.imag() / hbar;
    const double phase = s0.real() / hbar;
    constexpr double kExpCap = 700.0; // just below the double exp overflow threshold
    if (log_mag > kExpCap) {
        log_mag = kExpCap;
        result.saturated = true;
    }
    result.value = std::polar(std::exp(log_mag), phase);
    result.gradient = cplx{0.0, 1.0 / hbar} * jet.s(1) * result.value;
    return result;
}

} // namespace zevca
