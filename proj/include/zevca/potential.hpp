#pragma once

// One-dimensional model potentials with exact derivative stacks V_0..V_N at an
// arbitrary point, obtained by truncated Taylor-series (jet) arithmetic. The
// series recurrences are exact to machine precision at any order, which the
// hierarchy needs for large N.

#include <variant>
#include <vector>

namespace zevca {

// Truncated Taylor expansion about a point: value(x) ~ sum_k coeffs[k] (x-point)^k.
struct RealJet {
    double point = 0.0;
    std::vector<double> coeffs; // c_0..c_N

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

RealJet jet_constant(double value, double point, int order);
RealJet jet_variable(double point, int order); // the identity function x

RealJet jet_add(const RealJet& a, const RealJet& b);
RealJet jet_sub(const RealJet& a, const RealJet& b);
RealJet jet_mul(const RealJet& a, const RealJet& b);
RealJet jet_scale(const RealJet& a, double factor);
RealJet jet_square(const RealJet& a);
RealJet jet_exp(const RealJet& a);
RealJet jet_cosh(const RealJet& a);
RealJet jet_reciprocal(const RealJet& a); // throws on c_0 == 0

// V(x) = height / cosh(beta x)^2
struct EckartBarrier {
    double height = 1.0; // D > 0
    double beta = 1.0;   // > 0, inverse width
};

// V(x) = a x^2 + b x^4
struct QuarticPotential {
    double a = 0.5;
    double b = 1.0;
};

// V(x) = depth [1 - exp(-alpha x)]^2
struct MorsePotential {
    double depth = 1.0; // D > 0
    double alpha = 1.0; // > 0
};

// V(x) = (1/2) m omega^2 x^2
struct HarmonicPotential {
    double mass = 1.0;  // > 0
    double omega = 1.0; // > 0
};

// V(x) = sum_k coeffs[k] x^k
struct PolynomialPotential {
    std::vector<double> coeffs;
};

using PotentialSpec = std::variant<EckartBarrier, QuarticPotential, MorsePotential,
                                   HarmonicPotential, PolynomialPotential>;

void validate(const PotentialSpec& p);

// Pointwise potential value from the closed form.
double potential_value(const PotentialSpec& p, double x);

// Taylor jet of the potential about x0, built by series composition.
RealJet potential_jet(const PotentialSpec& p, double x0, int order);

// Derivative stack V_n = d^n V / dx^n at x0, n = 0..order, via V_n = n! c_n.
std::vector<double> derivative_stack(const PotentialSpec& p, double x0, int order);

} // namespace zevca
