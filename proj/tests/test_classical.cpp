#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "semiclassical/classical_flow.hpp"
#include "semiclassical/error.hpp"

using namespace scl;

namespace {

constexpr double kPi = std::numbers::pi;

ClassicalSystem caustic_system() { return {PhaseProfile::logcosh(5.0, 2.5), Potential::zero(), 1e-3}; }
ClassicalSystem harmonic_system() { return {PhaseProfile::zero(), Potential::harmonic(0.5, 1.0), 1e-3}; }

}  // namespace

TEST_SUITE("classical") {
  TEST_CASE("phase and amplitude descriptors") {
    const PhaseProfile lc = PhaseProfile::logcosh(5.0, 2.5);
    const double h = 1e-5;
    for (double x : {-0.3, 0.1, 0.5, 0.77, 1.4}) {
      CHECK(lc.slope(x) == doctest::Approx(-std::tanh(5.0 * x - 2.5)).epsilon(1e-14));
      CHECK(lc.slope(x) == doctest::Approx((lc.value(x + h) - lc.value(x - h)) / (2 * h)).epsilon(1e-8));
      CHECK(lc.curvature(x) == doctest::Approx((lc.slope(x + h) - lc.slope(x - h)) / (2 * h)).epsilon(1e-7));
    }
    CHECK(lc.slope_bound().value() == doctest::Approx(1.0));
    CHECK_FALSE(PhaseProfile::quadratic(1.0).slope_bound().has_value());

    std::vector<double> samples;
    for (int i = 0; i <= 400; ++i) samples.push_back(std::sin(-1.0 + 0.01 * i));
    const PhaseProfile tab = PhaseProfile::table(-1.0, 0.01, samples);
    for (double x : {-0.5, 0.0, 0.333, 2.5}) {
      CHECK(tab.value(x) == doctest::Approx(std::sin(x)).epsilon(1e-7));
      CHECK(tab.slope(x) == doctest::Approx(std::cos(x)).epsilon(1e-5));
    }

    const AmplitudeProfile g = AmplitudeProfile::gaussian(0.5, 25.0);
    CHECK(g.peak() == doctest::Approx(1.0));
    const auto [lo, hi] = g.support(1e-3);
    const double r = std::sqrt(std::log(1e3) / 25.0);
    CHECK(lo == doctest::Approx(0.5 - r).epsilon(1e-6));
    CHECK(hi == doctest::Approx(0.5 + r).epsilon(1e-6));
    const AmplitudeProfile pg = AmplitudeProfile::polynomial_gaussian(0.0, 0.5, {2.0, 0.0, -2.0});
    CHECK(pg.value(1.5) == doctest::Approx((2.0 - 4.5) * std::exp(-1.125)));
    CHECK(pg.derivative(0.7) == doctest::Approx((pg.value(0.7 + h) - pg.value(0.7 - h)) / (2 * h)).epsilon(1e-8));
  }

  TEST_CASE("flow_ode reduces to flow_free when V = 0") {
    const PhaseProfile ph = PhaseProfile::logcosh(5.0, 2.5);
    for (double y : {0.2, 0.5, 0.61, 0.9})
      for (double t : {0.05, 0.3, 0.6}) {
        const FlowSample a = flow_free(t, y, ph);
        const FlowSample b = flow_ode(t, y, ph, Potential::zero(), 1e-3);
        CHECK(std::abs(a.x - b.x) <= 1e-10);
        CHECK(std::abs(a.p - b.p) <= 1e-10);
        CHECK(std::abs(a.jac - b.jac) <= 1e-10);
        CHECK(std::abs(a.action - b.action) <= 1e-10);
      }
  }

  TEST_CASE("harmonic rays are rotations with conserved energy") {
    const ClassicalSystem sys = harmonic_system();
    for (double y : {0.0, 0.3, 0.5, 0.8, 1.2})
      for (double t : {0.4, 1.0, kPi / 2, 3.0}) {
        const FlowSample f = sys.flow(t, y);
        CHECK(std::abs(f.x - (0.5 + (y - 0.5) * std::cos(t))) <= 1e-8);
        CHECK(std::abs(f.p + (y - 0.5) * std::sin(t)) <= 1e-8);
        CHECK(std::abs(f.jac - std::cos(t)) <= 1e-8);
        const double e0 = 0.5 * (y - 0.5) * (y - 0.5);
        CHECK(std::abs(0.5 * f.p * f.p + sys.potential.value(f.x) - e0) <= 1e-8);
      }
  }

  TEST_CASE("variational Jacobian matches finite differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uy(0.1, 0.9), ut(0.0, 0.15);
    const ClassicalSystem sys{PhaseProfile::logcosh(5.0, 2.5), Potential::harmonic(0.2, 1.3), 1e-3};
    for (int i = 0; i < 20; ++i) {
      const double y = uy(rng), t = ut(rng), dy = 1e-5;
      const double fd = (sys.flow(t, y + dy).x - sys.flow(t, y - dy).x) / (2 * dy);
      CHECK(sys.flow(t, y).jac == doctest::Approx(fd).epsilon(1e-5));
    }
  }

  TEST_CASE("caustic onset times") {
    const CausticReport free = caustic_onset(caustic_system(), {0.0, 1.0}, {0.0, 0.6});
    REQUIRE(free.found());
    CHECK(free.t_star == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(free.y_star == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(free.x_star == doctest::Approx(0.5).epsilon(1e-4));
    const CausticReport harm = caustic_onset(harmonic_system(), {0.0, 1.0}, {0.0, 3.0});
    REQUIRE(harm.found());
    CHECK(harm.t_star == doctest::Approx(kPi / 2).epsilon(1e-6));
    const ClassicalSystem plane{PhaseProfile::plane(0.5), Potential::zero(), 1e-3};
    CHECK_FALSE(caustic_onset(plane, {0.0, 1.0}, {0.0, 1.0}).found());
    const ClassicalSystem rare{PhaseProfile::quadratic(1.0), Potential::zero(), 1e-3};
    CHECK_FALSE(caustic_onset(rare, {0.0, 1.0}, {0.0, 1.0}).found());
    CHECK_THROWS_AS(caustic_onset(plane, {1.0, 0.0}, {0.0, 1.0}), InvalidArgument);
  }

  TEST_CASE("inverse flow and caustic errors") {
    const ClassicalSystem sys = caustic_system();
    CHECK(invert_flow(0.1, 0.5, sys) == doctest::Approx(0.5));
    const ClassicalSystem plane{PhaseProfile::plane(0.7), Potential::zero(), 1e-3};
    CHECK(invert_flow(0.3, 1.0, plane) == doctest::Approx(1.0 - 0.21));
    for (double y : {0.1, 0.45, 0.5, 0.7}) {
      const double x = sys.flow(0.15, y).x;
      CHECK(invert_flow(0.15, x, sys) == doctest::Approx(y).epsilon(1e-10));
    }
    CHECK_THROWS_AS(invert_flow(0.3, 0.5, sys, 0.2), CausticError);
  }

  TEST_CASE("single-phase WKB solves the transport and eikonal equations") {
    const ClassicalSystem sys = caustic_system();
    const AmplitudeProfile a0 = AmplitudeProfile::gaussian(0.5, 25.0);
    const double ht = 1e-5, hx = 1e-5;
    for (double t : {0.05, 0.1}) {
      for (double x : {0.3, 0.45, 0.5, 0.62}) {
        auto flux = [&](double tt, double xx) {
          return wkb_density(tt, xx, a0, sys) * sys.phase.slope(invert_flow(tt, xx, sys));
        };
        const double drho = (wkb_density(t + ht, x, a0, sys) - wkb_density(t - ht, x, a0, sys)) / (2 * ht);
        const double dflux = (flux(t, x + hx) - flux(t, x - hx)) / (2 * hx);
        CHECK(std::abs(drho + dflux) <= 1e-4 * std::max(1.0, std::abs(drho)));
        const double st = (wkb_phase(t + ht, x, sys) - wkb_phase(t - ht, x, sys)) / (2 * ht);
        const double sx = (wkb_phase(t, x + hx, sys) - wkb_phase(t, x - hx, sys)) / (2 * hx);
        CHECK(std::abs(st + 0.5 * sx * sx) <= 1e-6);
        CHECK(std::norm(wkb_amplitude(t, x, a0, sys)) == doctest::Approx(wkb_density(t, x, a0, sys)));
      }
    }
  }

  TEST_CASE("classical bundle layout") {
    const ClassicalSystem sys = harmonic_system();
    const TrajectoryBundle b = classical_bundle(sys, {0.2, 0.5, 0.8}, 250, 100);
    REQUIRE(b.time_count() == 4);
    CHECK(b.times.back() == doctest::Approx(0.25));
    CHECK(b.x_at(1, 3) == doctest::Approx(0.5));
    CHECK(b.x_at(2, 2) == doctest::Approx(0.5 + 0.3 * std::cos(0.2)).epsilon(1e-12));
    CHECK(b.jac.size() == 12);
  }
}
