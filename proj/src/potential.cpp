#include "zevca/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace zevca {

namespace {

void require_compatible(const RealJet& a, const RealJet& b) {
    if (a.coeffs.size() != b.coeffs.size())
        throw std::invalid_argument("jet arithmetic: mismatched orders");
    if (a.point != b.point)
        throw std::invalid_argument("jet arithmetic: mismatched expansion points");
}

void require_finite(const RealJet& a) {
    for (double c : a.coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("jet arithmetic: non-finite coefficient");
}

} // namespace

RealJet jet_constant(double value, double point, int order) {
    if (order < 0) throw std::invalid_argument("jet order must be >= 0");
    RealJet j;
    j.point = point;
    j.coeffs.assign(static_cast<std::size_t>(order) + 1, 0.0);
    j.coeffs[0] = value;
    return j;
}

RealJet jet_variable(double point, int order) {
    RealJet j = jet_constant(point, point, order);
    if (order >= 1) j.coeffs[1] = 1.0;
    return j;
}

RealJet jet_add(const RealJet& a, const RealJet& b) {
    require_compatible(a, b);
    RealJet out = a;
    for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] += b.coeffs[k];
    return out;
}

RealJet jet_sub(const RealJet& a, const RealJet& b) {
    require_compatible(a, b);
    RealJet out = a;
    for (std::size_t k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] -= b.coeffs[k];
    return out;
}

RealJet jet_mul(const RealJet& a, const RealJet& b) {
    require_compatible(a, b);
    RealJet out = jet_constant(0.0, a.point, a.order());
    for (std::size_t k = 0; k < out.coeffs.size(); ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i <= k; ++i) sum += a.coeffs[i] * b.coeffs[k - i];
        out.coeffs[k] = sum;
    }
    return out;
}

RealJet jet_scale(const RealJet& a, double factor) {
    RealJet out = a;
    for (double& c : out.coeffs) c *= factor;
    return out;
}

RealJet jet_square(const RealJet& a) { return jet_mul(a, a); }

// e = exp(f): e' = f' e gives k e_k = sum_{j=1..k} j f_j e_{k-j}.
RealJet jet_exp(const RealJet& a) {
    require_finite(a);
    RealJet out = jet_constant(std::exp(a.coeffs[0]), a.point, a.order());
    for (std::size_t k = 1; k < out.coeffs.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 1; j <= k; ++j)
            sum += static_cast<double>(j) * a.coeffs[j] * out.coeffs[k - j];
        out.coeffs[k] = sum / static_cast<double>(k);
    }
    return out;
}

// cosh/sinh advance jointly: c' = f' s, s' = f' c.
RealJet jet_cosh(const RealJet& a) {
    require_finite(a);
    const std::size_t n = a.coeffs.size();
    std::vector<double> c(n, 0.0), s(n, 0.0);
    c[0] = std::cosh(a.coeffs[0]);
    s[0] = std::sinh(a.coeffs[0]);
    for (std::size_t k = 1; k < n; ++k) {
        double cs = 0.0, ss = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            const double w = static_cast<double>(j) * a.coeffs[j];
            cs += w * s[k - j];
            ss += w * c[k - j];
        }
        c[k] = cs / static_cast<double>(k);
        s[k] = ss / static_cast<double>(k);
    }
    RealJet out;
    out.point = a.point;
    out.coeffs = std::move(c);
    return out;
}

// r = 1/f: r_0 = 1/f_0, r_k = -(1/f_0) sum_{j=1..k} f_j r_{k-j}.
RealJet jet_reciprocal(const RealJet& a) {
    require_finite(a);
    if (a.coeffs[0] == 0.0)
        throw std::domain_error("jet_reciprocal: singular jet (zero constant term)");
    RealJet out = jet_constant(1.0 / a.coeffs[0], a.point, a.order());
    const double inv = out.coeffs[0];
    for (std::size_t k = 1; k < out.coeffs.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 1; j <= k; ++j) sum += a.coeffs[j] * out.coeffs[k - j];
        out.coeffs[k] = -inv * sum;
    }
    return out;
}

void validate(const PotentialSpec& p) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EckartBarrier>) {
                if (!(v.height > 0.0) || !(v.beta > 0.0))
                    throw std::invalid_argument("eckart: height and beta must be > 0");
            } else if constexpr (std::is_same_v<T, QuarticPotential>) {
                if (!std::isfinite(v.a) || !std::isfinite(v.b))
                    throw std::invalid_argument("quartic: coefficients must be finite");
            } else if constexpr (std::is_same_v<T, MorsePotential>) {
                if (!(v.depth > 0.0) || !(v.alpha > 0.0))
                    throw std::invalid_argument("morse: depth and alpha must be > 0");
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                if (!(v.mass > 0.0) || !(v.omega > 0.0))
                    throw std::invalid_argument("harmonic: mass and omega must be > 0");
            } else {
                if (v.coeffs.empty())
                    throw std::invalid_argument("polynomial: needs at least one coefficient");
                for (double c : v.coeffs)
                    if (!std::isfinite(c))
                        throw std::invalid_argument("polynomial: coefficients must be finite");
            }
        },
        p);
}

namespace {

double poly_value(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

RealJet poly_jet(const std::vector<double>& coeffs, double x0, int order) {
    const RealJet x = jet_variable(x0, order);
    RealJet acc = jet_constant(0.0, x0, order);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = jet_mul(acc, x);
        acc.coeffs[0] += coeffs[i];
    }
    return acc;
}

} // namespace

double potential_value(const PotentialSpec& p, double x) {
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EckartBarrier>) {
                const double c = std::cosh(v.beta * x);
                return v.height / (c * c);
            } else if constexpr (std::is_same_v<T, QuarticPotential>) {
                return v.a * x * x + v.b * x * x * x * x;
            } else if constexpr (std::is_same_v<T, MorsePotential>) {
                const double u = 1.0 - std::exp(-v.alpha * x);
                return v.depth * u * u;
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                return 0.5 * v.mass * v.omega * v.omega * x * x;
            } else {
                return poly_value(v.coeffs, x);
            }
        },
        p);
}

RealJet potential_jet(const PotentialSpec& p, double x0, int order) {
    if (order < 0) throw std::invalid_argument("derivative stack order must be >= 0");
    if (!std::isfinite(x0)) throw std::invalid_argument("derivative stack point must be finite");
    return std::visit(
        [x0, order](const auto& v) -> RealJet {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EckartBarrier>) {
                // D * (1/cosh(beta x))^2
                const RealJet bx = jet_scale(jet_variable(x0, order), v.beta);
                return jet_scale(jet_square(jet_reciprocal(jet_cosh(bx))), v.height);
            } else if constexpr (std::is_same_v<T, QuarticPotential>) {
                const RealJet x2 = jet_square(jet_variable(x0, order));
                return jet_add(jet_scale(x2, v.a), jet_scale(jet_square(x2), v.b));
            } else if constexpr (std::is_same_v<T, MorsePotential>) {
                // D * (1 - exp(-alpha x))^2
                const RealJet e = jet_exp(jet_scale(jet_variable(x0, order), -v.alpha));
                return jet_scale(jet_square(jet_sub(jet_constant(1.0, x0, order), e)), v.depth);
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                const RealJet x2 = jet_square(jet_variable(x0, order));
                return jet_scale(x2, 0.5 * v.mass * v.omega * v.omega);
            } else {
                return poly_jet(v.coeffs, x0, order);
            }
        },
        p);
}

std::vector<double> derivative_stack(const PotentialSpec& p, double x0, int order) {
    const RealJet jet = potential_jet(p, x0, order);
    std::vector<double> stack(jet.coeffs.size());
    double factorial = 1.0;
    for (std::size_t n = 0; n < stack.size(); ++n) {
        if (n > 1) factorial *= static_cast<double>(n);
        stack[n] = factorial * jet.coeffs[n];
    }
    return stack;
}

} // namespace zevca
