#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "zevca/observables.hpp"

using namespace zevca;
using testsupport::random_cplx;
using testsupport::uniform;

namespace {

PhaseJet jet_from(std::vector<cplx> coeffs, double x0 = 0.0) {
    PhaseJet jet = make_phase_jet(static_cast<int>(coeffs.size()) - 1, x0);
    jet.coeffs = std::move(coeffs);
    return jet;
}

} // namespace

TEST_CASE("probability_density closed forms") {
    CHECK(probability_density(jet_from({{0.3, 0.0}}), 1.0) == doctest::Approx(1.0));
    const double hbar = 1.7;
    CHECK(probability_density(jet_from({{0.0, hbar * std::log(4.0) / 2.0}}), hbar) ==
          doctest::Approx(0.25).epsilon(1e-14));
    // normalized gaussian evaluated at its center
    const double alpha0 = 1.3;
    const GaussianParams g = GaussianParams::normalized(alpha0, 0.7, -0.4, 1.0);
    const PhaseJet jet = gaussian_phase_jet(g, 0.7, 3, 1.0);
    CHECK(probability_density(jet, 1.0) ==
          doctest::Approx(std::sqrt(2.0 * alpha0 / std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("probability_current closed forms and nodal guard") {
    CHECK(probability_current(jet_from({{0.5, 0.0}, {3.0, 0.0}}), 2.0, 1.0) ==
          doctest::Approx(1.5));
    CHECK(probability_current(jet_from({{0.0, 0.0}, {0.0, 4.0}}), 2.0, 1.0) == 0.0);
    // density below the guard reports zero current
    const PhaseJet dead = jet_from({{0.0, 400.0}, {1.0, 0.0}});
    CHECK(probability_density(dead, 1.0) < 1e-300);
    CHECK(probability_current(dead, 1.0, 1.0) == 0.0);
}

TEST_CASE("current identity: (hbar/m) Im(psi* psi_x) equals the phase form") {
    for (int trial = 0; trial < 200; ++trial) {
        const double hbar = uniform(0.5, 2.0);
        const double mass = uniform(0.5, 3.0);
        PhaseJet jet = make_phase_jet(3, 0.0);
        for (auto& c : jet.coeffs) c = random_cplx(3.0);
        const auto r = reconstruct_amplitude(jet, hbar);
        const double via_psi = hbar / mass * std::imag(std::conj(r.value) * r.gradient);
        const double via_phase = probability_current(jet, mass, hbar);
        const double scale =
            probability_density(jet, hbar) * (1.0 + std::abs(jet.coeffs[1])) / mass;
        CHECK(std::abs(via_psi - via_phase) <= 1e-12 * std::max(scale, 1e-30));
    }
}

TEST_CASE("accumulate_tunneling quadrature") {
    SUBCASE("zero current integrates to zero") {
        TrajectoryRecord rec;
        rec.mode = TimeMode::RealTime;
        for (int k = 0; k <= 10; ++k) {
            rec.times.push_back(0.1 * k);
            rec.jets.push_back(jet_from({{0.0, 1e6}, {1.0, 0.0}})); // density ~ 0
        }
        const TunnelingSeries s = accumulate_tunneling(rec, 1.0, 1.0);
        for (double T : s.cumulative) CHECK(T == 0.0);
    }
    SUBCASE("constant current integrates exactly under the trapezoid rule") {
        TrajectoryRecord rec;
        rec.mode = TimeMode::RealTime;
        for (int k = 0; k <= 7; ++k) {
            rec.times.push_back(0.25 * k);
            rec.jets.push_back(jet_from({{0.0, 0.0}, {2.0, 0.0}})); // J = 2/m = 1
        }
        const TunnelingSeries s = accumulate_tunneling(rec, 2.0, 1.0);
        CHECK(s.cumulative.front() == 0.0);
        for (std::size_t k = 0; k < s.times.size(); ++k)
            CHECK(s.cumulative[k] == doctest::Approx(s.times[k]).epsilon(1e-14));
    }
    SUBCASE("imaginary-time records are rejected") {
        TrajectoryRecord rec;
        rec.mode = TimeMode::ImaginaryTime;
        rec.times = {0.0};
        rec.jets = {jet_from({{0, 0}})};
        CHECK_THROWS_AS(accumulate_tunneling(rec, 1.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("detect_asymptote") {
    TunnelingSeries s;
    for (int k = 0; k <= 100; ++k) {
        s.times.push_back(0.1 * k);
        s.cumulative.push_back(0.42);
    }
    CHECK(detect_asymptote(s, 2.0, 1e-3) == 0.42);

    TunnelingSeries linear;
    for (int k = 0; k <= 100; ++k) {
        linear.times.push_back(0.1 * k);
        linear.cumulative.push_back(0.01 * k);
    }
    CHECK_FALSE(detect_asymptote(linear, 2.0, 1e-3).has_value());
}

TEST_CASE("energy_estimate closed forms") {
    // exact harmonic ground state at the minimum: S = (., 0, i m omega)
    const double m = 1.0, omega = 1.0;
    const PhaseJet jet = jet_from({{0.0, 0.0}, {0.0, 0.0}, {0.0, m * omega}});
    CHECK(energy_estimate(jet, 0.0, m, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    // away from the minimum the estimator shifts by the local potential
    CHECK(energy_estimate(jet, 0.3, m, 1.0) == doctest::Approx(0.8).epsilon(1e-13));
}

TEST_CASE("harmonic eigen-invariance: estimator constant along the relaxed trajectory") {
    const double m = 1.3, omega = 0.9, hbar = 1.0;
    PhaseJet initial = make_phase_jet(2, 0.0);
    initial.coeffs[2] = cplx{0.0, m * omega};
    IntegrationConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 5.0;
    cfg.record_stride = 50;
    const PotentialSpec p = HarmonicPotential{m, omega};
    const TrajectoryRecord rec = propagate(initial, p, 0.0, cfg, TimeMode::ImaginaryTime, m, hbar);
    const EnergySeries series = energy_series(rec, p, m, hbar);
    for (double e : series.estimates)
        CHECK(std::abs(e - 0.5 * hbar * omega) < 1e-10);
}

TEST_CASE("harmonic relaxation plateaus at hbar omega / 2 from any gaussian start") {
    const double m = 1.0, omega = 1.0, hbar = 1.0;
    const GaussianParams g = GaussianParams::normalized(0.31, 0.4, 0.0, hbar);
    const PhaseJet initial = gaussian_phase_jet(g, 0.2, 2, hbar);
    IntegrationConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 40.0;
    cfg.record_stride = 100;
    const PotentialSpec p = HarmonicPotential{m, omega};
    const TrajectoryRecord rec =
        propagate(initial, p, 0.2, cfg, TimeMode::ImaginaryTime, m, hbar);
    const EnergySeries series = energy_series(rec, p, m, hbar);
    const auto plateau = detect_plateau(series, 8.0, 1e-3);
    REQUIRE(plateau.has_value());
    CHECK(*plateau == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("detect_plateau rejects a decaying series") {
    EnergySeries s;
    for (int k = 0; k <= 100; ++k) {
        s.taus.push_back(0.1 * k);
        s.estimates.push_back(1.0 + std::exp(-0.05 * k));
    }
    CHECK_FALSE(detect_plateau(s, 2.0, 1e-5).has_value());
    CHECK(detect_plateau(s, 2.0, 0.5).has_value());
}

TEST_CASE("validate_setup fires the documented warnings") {
    const GaussianParams g = GaussianParams::normalized(1.0, 0.0, 0.0, 1.0);
    SUBCASE("free particle: flat potential warning") {
        const auto diags = validate_setup(PolynomialPotential{{0.0}}, g, 0.7, 6,
                                          SetupThresholds{}, 1.0);
        REQUIRE(diags.size() >= 1);
        CHECK(diags.front().kind == SetupDiagnostic::Kind::FlatPotential);
    }
    SUBCASE("harmonic at the origin: no warnings") {
        const auto diags =
            validate_setup(HarmonicPotential{1.0, 1.0}, g, 0.0, 4, SetupThresholds{}, 1.0);
        CHECK(diags.empty());
    }
    SUBCASE("distant packet: negligible density warning with the value attached") {
        const GaussianParams far = GaussianParams::normalized(94.2477796076938, -1.5,
                                                              34.641016151377546, 1.0);
        const auto diags = validate_setup(EckartBarrier{40.0, 4.3228}, far, 0.0, 10,
                                          SetupThresholds{}, 1.0);
        REQUIRE(diags.size() == 1);
        CHECK(diags.front().kind == SetupDiagnostic::Kind::NegligibleDensity);
        CHECK(diags.front().value > 0.0);
        CHECK(diags.front().value < 1e-100);
    }
}
