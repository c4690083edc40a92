#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "test_support.hpp"
#include "zevca/potential.hpp"

using namespace zevca;
using testsupport::uniform;

TEST_CASE("jet arithmetic basics") {
    const double x0 = 0.7;
    SUBCASE("exp of x about 0") {
        RealJet x = jet_variable(0.0, 2); // (0, 1, 0)
        const RealJet e = jet_exp(x);
        CHECK(e.coeffs[0] == doctest::Approx(1.0));
        CHECK(e.coeffs[1] == doctest::Approx(1.0));
        CHECK(e.coeffs[2] == doctest::Approx(0.5));
    }
    SUBCASE("reciprocal of a constant") {
        const RealJet r = jet_reciprocal(jet_constant(2.0, x0, 2));
        CHECK(r.coeffs[0] == doctest::Approx(0.5));
        CHECK(r.coeffs[1] == 0.0);
        CHECK(r.coeffs[2] == 0.0);
    }
    SUBCASE("truncated product (1+x)(1-x)") {
        RealJet a = jet_constant(1.0, 0.0, 1);
        a.coeffs[1] = 1.0;
        RealJet b = jet_constant(1.0, 0.0, 1);
        b.coeffs[1] = -1.0;
        const RealJet p = jet_mul(a, b);
        CHECK(p.coeffs[0] == doctest::Approx(1.0));
        CHECK(p.coeffs[1] == doctest::Approx(0.0));
    }
    SUBCASE("singular reciprocal throws") {
        CHECK_THROWS_AS(jet_reciprocal(jet_variable(0.0, 3)), std::domain_error);
    }
    SUBCASE("mismatched operands throw") {
        CHECK_THROWS_AS(jet_add(jet_constant(1.0, 0.0, 2), jet_constant(1.0, 0.0, 3)),
                        std::invalid_argument);
        CHECK_THROWS_AS(jet_mul(jet_constant(1.0, 0.0, 2), jet_constant(1.0, 0.5, 2)),
                        std::invalid_argument);
    }
}

TEST_CASE("jet exp and cosh coefficients for a linear argument") {
    for (int trial = 0; trial < 25; ++trial) {
        const double x0 = uniform(-1.0, 1.0);
        const double a = uniform(-2.0, 2.0);
        const RealJet lin = jet_scale(jet_variable(x0, 8), a); // f = a x about x0
        const RealJet e = jet_exp(lin);
        const RealJet c = jet_cosh(lin);
        double fact = 1.0;
        for (int n = 0; n <= 8; ++n) {
            if (n > 0) fact *= n;
            const double e_expected = std::exp(a * x0) * std::pow(a, n) / fact;
            const double c_expected =
                (n % 2 == 0 ? std::cosh(a * x0) : std::sinh(a * x0)) * std::pow(a, n) / fact;
            CHECK(e.coeffs[static_cast<std::size_t>(n)] ==
                  doctest::Approx(e_expected).epsilon(1e-12));
            CHECK(c.coeffs[static_cast<std::size_t>(n)] ==
                  doctest::Approx(c_expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("derivative_stack hand values") {
    SUBCASE("quartic at x0 = 1") {
        const PotentialSpec p = QuarticPotential{0.5, 1.0};
        const auto stack = derivative_stack(p, 1.0, 5);
        const std::vector<double> expected = {1.5, 5.0, 13.0, 24.0, 24.0, 0.0};
        REQUIRE(stack.size() == expected.size());
        for (std::size_t n = 0; n < expected.size(); ++n)
            CHECK(stack[n] == doctest::Approx(expected[n]).epsilon(1e-13));
    }
    SUBCASE("eckart at the barrier top") {
        const double d = 40.0, beta = 4.3228;
        const PotentialSpec p = EckartBarrier{d, beta};
        const auto stack = derivative_stack(p, 0.0, 2);
        CHECK(stack[0] == doctest::Approx(40.0).epsilon(1e-14));
        CHECK(stack[1] == doctest::Approx(0.0));
        CHECK(stack[2] == doctest::Approx(-2.0 * d * beta * beta).epsilon(1e-13));
    }
    SUBCASE("harmonic at the origin") {
        const PotentialSpec p = HarmonicPotential{1.0, 1.0};
        const auto stack = derivative_stack(p, 0.0, 4);
        const std::vector<double> expected = {0.0, 0.0, 1.0, 0.0, 0.0};
        for (std::size_t n = 0; n < expected.size(); ++n)
            CHECK(stack[n] == doctest::Approx(expected[n]).epsilon(1e-14));
    }
}

TEST_CASE("potential_value closed forms") {
    CHECK(potential_value(EckartBarrier{40.0, 4.3228}, 0.0) == doctest::Approx(40.0));
    CHECK(potential_value(MorsePotential{0.1745, 1.026}, 0.0) == doctest::Approx(0.0));
    CHECK(potential_value(QuarticPotential{0.5, 1.0}, 1.0) == doctest::Approx(1.5));
    CHECK(potential_value(HarmonicPotential{2.0, 3.0}, 0.5) ==
          doctest::Approx(0.5 * 2.0 * 9.0 * 0.25));
    CHECK(potential_value(PolynomialPotential{{1.0, -2.0, 0.5}}, 2.0) ==
          doctest::Approx(1.0 - 4.0 + 2.0));
}

TEST_CASE("derivative_stack agrees with finite differences of the value") {
    // h is scaled to each potential's length scale; the Eckart barrier is the
    // narrowest (1/beta ~ 0.23). High orders use a wider, coarser stencil to
    // keep the h^-n roundoff amplification below the tolerance.
    const std::vector<std::tuple<PotentialSpec, double, double>> cases = {
        {EckartBarrier{40.0, 4.3228}, 0.0125, 0.02},
        {QuarticPotential{0.5, 1.0}, 0.1, 0.2},
        {MorsePotential{0.1745, 1.026}, 0.1, 0.2},
        {HarmonicPotential{1.0, 1.0}, 0.1, 0.2},
        {PolynomialPotential{{0.2, -1.0, 0.7, 0.1, -0.3}}, 0.1, 0.2},
    };
    for (const auto& [p, h_low, h_high] : cases) {
        for (int trial = 0; trial < 8; ++trial) {
            const double x0 = uniform(-0.8, 0.8);
            const auto stack = derivative_stack(p, x0, 8);
            double stack_max = 0.0;
            for (double v : stack) stack_max = std::max(stack_max, std::abs(v));
            for (int n = 0; n <= 8; ++n) {
                const double fd = testsupport::fd_derivative(
                    [&](double x) { return potential_value(p, x); }, x0, n, n <= 6 ? 17 : 21,
                    n <= 6 ? h_low : h_high);
                const double tol = (n <= 6 ? 1e-6 : 1e-3) * std::max(stack_max, 1.0);
                CHECK(std::abs(stack[static_cast<std::size_t>(n)] - fd) <= tol);
            }
        }
    }
}

TEST_CASE("polynomial stacks are exact against symbolic differentiation") {
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> coeffs(static_cast<std::size_t>(2 + trial % 7));
        for (double& c : coeffs) c = uniform(-2.0, 2.0);
        const double x0 = uniform(-1.5, 1.5);
        const int order = static_cast<int>(coeffs.size()) + 2;
        const auto stack = derivative_stack(PolynomialPotential{coeffs}, x0, order);

        for (int n = 0; n <= order; ++n) {
            // V_n = sum_{k>=n} c_k k!/(k-n)! x0^(k-n)
            double expected = 0.0;
            for (std::size_t k = static_cast<std::size_t>(n); k < coeffs.size(); ++k) {
                double perm = 1.0;
                for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j)
                    perm *= static_cast<double>(k - j);
                expected += coeffs[k] * perm * std::pow(x0, static_cast<double>(k) - n);
            }
            CHECK(std::abs(stack[static_cast<std::size_t>(n)] - expected) <=
                  1e-13 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("prefix property: lower order stack is a prefix of the higher one") {
    const std::vector<PotentialSpec> cases = {
        EckartBarrier{40.0, 4.3228}, QuarticPotential{0.5, 1.0}, MorsePotential{0.1745, 1.026},
        HarmonicPotential{1.0, 2.0}, PolynomialPotential{{0.5, 1.0, -0.25, 2.0}}};
    for (const auto& p : cases) {
        const double x0 = uniform(-1.0, 1.0);
        const auto big = derivative_stack(p, x0, 12);
        for (int m : {0, 3, 7}) {
            const auto small = derivative_stack(p, x0, m);
            for (int n = 0; n <= m; ++n)
                CHECK(small[static_cast<std::size_t>(n)] == big[static_cast<std::size_t>(n)]);
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(validate(PotentialSpec{EckartBarrier{-1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PotentialSpec{MorsePotential{1.0, -0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PotentialSpec{HarmonicPotential{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PotentialSpec{PolynomialPotential{{}}}), std::invalid_argument);
    CHECK_NOTHROW(validate(PotentialSpec{QuarticPotential{-0.5, 1.0}}));
}
