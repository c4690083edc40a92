#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "zevca/grid_oracle.hpp"

using namespace zevca;

namespace {

GridState harmonic_coherent_state(double alpha0, double xc, const GridSpec& spec) {
    const GaussianParams g = GaussianParams::normalized(alpha0, xc, 0.0, 1.0);
    return initialize_gaussian(spec, g, 1.0, 1.0);
}

} // namespace

TEST_CASE("fft round trip and a known transform") {
    Fft fft(8);
    std::vector<cplx> a = {{1, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}};
    fft.forward(a);
    for (const cplx& z : a) CHECK(std::abs(z - cplx{1, 0}) < 1e-15); // delta -> flat
    std::vector<cplx> b(256);
    for (auto& z : b) z = testsupport::random_cplx(1.0);
    const std::vector<cplx> original = b;
    Fft big(256);
    big.forward(b);
    big.inverse(b);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(std::abs(b[i] - original[i]) < 1e-13);
}

TEST_CASE("initialize_gaussian: norm, peak, and variance") {
    const GridSpec spec{-10.0, 10.0, 1024};
    const double alpha0 = 0.5, xc = 1.25;
    const GaussianParams g = GaussianParams::normalized(alpha0, xc, 0.4, 1.0);
    const GridState s = initialize_gaussian(spec, g, 1.0, 1.0);

    CHECK(grid_norm(s) == doctest::Approx(1.0).epsilon(1e-12));

    int peak_index = 0;
    double peak = 0.0;
    for (int i = 0; i < s.npoints; ++i)
        if (std::norm(s.psi[static_cast<std::size_t>(i)]) > peak) {
            peak = std::norm(s.psi[static_cast<std::size_t>(i)]);
            peak_index = i;
        }
    CHECK(std::abs(s.x(peak_index) - xc) <= s.dx());

    CHECK(grid_variance_x(s) == doctest::Approx(1.0 / (4.0 * alpha0)).epsilon(1e-8));
}

TEST_CASE("initialize_gaussian rejects uncontained packets and bad grids") {
    const GaussianParams g = GaussianParams::normalized(0.5, 9.5, 0.0, 1.0);
    CHECK_THROWS_AS(initialize_gaussian(GridSpec{-10.0, 10.0, 1024}, g, 1.0, 1.0),
                    std::runtime_error);
    const GaussianParams ok = GaussianParams::normalized(0.5, 0.0, 0.0, 1.0);
    CHECK_THROWS_AS(initialize_gaussian(GridSpec{-10.0, 10.0, 1000}, ok, 1.0, 1.0),
                    std::invalid_argument); // not a power of two
    CHECK_THROWS_AS(initialize_gaussian(GridSpec{-10.0, 10.0, 128}, ok, 1.0, 1.0),
                    std::invalid_argument); // too small
}

TEST_CASE("nyquist guard rejects oversized real-time steps") {
    const GridSpec spec{-10.0, 10.0, 1024};
    CHECK_THROWS_AS(SplitOperator(spec, HarmonicPotential{1.0, 1.0}, 1.0, TimeMode::RealTime,
                                  1.0, 1.0),
                    std::invalid_argument);
    CHECK_NOTHROW(SplitOperator(spec, HarmonicPotential{1.0, 1.0}, 1e-4, TimeMode::RealTime,
                                1.0, 1.0));
}

TEST_CASE("free packet follows the analytic spreading law") {
    const GridSpec spec{-16.0, 16.0, 512};
    const double alpha0 = 0.5;
    GridState s = harmonic_coherent_state(alpha0, 0.0, spec);
    const PotentialSpec free_space = PolynomialPotential{{0.0}};
    const double dt = 1e-3;
    const SplitOperator stepper(spec, free_space, dt, TimeMode::RealTime, 1.0, 1.0);
    for (int i = 0; i < 1000; ++i) stepper.advance(s);
    const double t = 1.0;
    const double sigma0_sq = 1.0 / (4.0 * alpha0);
    const double expected = sigma0_sq * (1.0 + std::pow(t / (2.0 * 1.0 * sigma0_sq), 2));
    CHECK(std::abs(grid_variance_x(s) - expected) < 1e-8);
}

TEST_CASE("harmonic density returns after one period; norm and energy are conserved") {
    const GridSpec spec{-10.0, 10.0, 512};
    const double omega = 1.0;
    GridState s = harmonic_coherent_state(0.5, -1.0, spec); // alpha0 = m omega / 2hbar: coherent
    const std::vector<double> initial_density = [&] {
        std::vector<double> d(s.psi.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(s.psi[i]);
        return d;
    }();
    const PotentialSpec p = HarmonicPotential{1.0, omega};
    const double period = 2.0 * std::numbers::pi / omega;
    const long nsteps = 62832; // ~ period / 1e-4
    const double dt = period / nsteps;
    const SplitOperator stepper(spec, p, dt, TimeMode::RealTime, 1.0, 1.0);
    const double e0 = rayleigh_energy(s, p);
    for (long i = 0; i < nsteps; ++i) stepper.advance(s);

    CHECK(std::abs(grid_norm(s) - 1.0) < 1e-10); // unitarity over 6e4 steps
    CHECK(std::abs(rayleigh_energy(s, p) - e0) < 1e-8);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < s.psi.size(); ++i)
        max_dev = std::max(max_dev, std::abs(std::norm(s.psi[i]) - initial_density[i]));
    CHECK(max_dev < 1e-8);
}

TEST_CASE("imaginary-time relaxation reaches the harmonic ground state") {
    const GridSpec spec{-12.0, 12.0, 512};
    GridState s = harmonic_coherent_state(0.3, 0.9, spec); // squeezed, displaced start
    const PotentialSpec p = HarmonicPotential{1.0, 1.0};
    const double dtau = 1e-3;
    const SplitOperator stepper(spec, p, dtau, TimeMode::ImaginaryTime, 1.0, 1.0);
    double prev = rayleigh_energy(s, p);
    bool monotone = true;
    for (int i = 0; i < 30000; ++i) {
        stepper.advance(s);
        if (i % 500 == 0) {
            const double e = rayleigh_energy(s, p);
            if (e > prev + 1e-12) monotone = false;
            prev = e;
        }
    }
    CHECK(monotone);
    CHECK(std::abs(grid_norm(s) - 1.0) < 1e-12); // renormalized every step
    CHECK(rayleigh_energy(s, p) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("rayleigh_energy on the exact harmonic ground state") {
    const GridSpec spec{-8.0, 8.0, 1024};
    GridState s = harmonic_coherent_state(0.5, 0.0, spec); // exactly the ground state
    CHECK(std::abs(rayleigh_energy(s, HarmonicPotential{1.0, 1.0}) - 0.5) < 1e-10);
}

TEST_CASE("transmitted_probability") {
    const GridSpec spec{-16.0, 16.0, 1024};
    GridState s = harmonic_coherent_state(0.5, 0.0, spec);
    CHECK(transmitted_probability(s, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(transmitted_probability(s, 14.0) < 1e-12);
    GridState left = harmonic_coherent_state(0.5, -5.0, spec);
    CHECK(transmitted_probability(left, 0.0) < 1e-12);
}

TEST_CASE("local_density: peak value and tails") {
    const GridSpec spec{-10.0, 10.0, 2048};
    const double alpha0 = 0.8, xc = 0.3125; // on a grid node: no interpolation error
    GridState s = harmonic_coherent_state(alpha0, xc, spec);
    CHECK(local_density(s, xc) ==
          doctest::Approx(std::sqrt(2.0 * alpha0 / std::numbers::pi)).epsilon(1e-8));
    CHECK(local_density(s, 9.0) < 1e-12);
    CHECK_THROWS_AS(local_density(s, 11.0), std::invalid_argument);
}

TEST_CASE("single-step convenience wrapper matches the planned stepper") {
    const GridSpec spec{-10.0, 10.0, 256};
    GridState a = harmonic_coherent_state(0.4, 0.2, spec);
    GridState b = a;
    const PotentialSpec p = QuarticPotential{0.5, 1.0};
    const SplitOperator stepper(spec, p, 1e-4, TimeMode::RealTime, 1.0, 1.0);
    stepper.advance(a);
    split_operator_step(b, p, 1e-4, TimeMode::RealTime);
    for (std::size_t i = 0; i < a.psi.size(); ++i) CHECK(a.psi[i] == b.psi[i]);
}
