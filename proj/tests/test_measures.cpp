#include <doctest.h>

#include <cmath>
#include <random>

#include "semiclassical/error.hpp"
#include "semiclassical/measures.hpp"
#include "semiclassical/solver.hpp"

using namespace scl;

TEST_SUITE("measures") {
  TEST_CASE("histogram bookkeeping") {
    MomentumHistogram h = MomentumHistogram::uniform(0.0, 1.0, 4);
    REQUIRE(h.bins() == 4);
    h.add(0.1, 1.0);
    h.add(0.3, 2.0);
    h.add(-5.0, 0.5);
    h.add(7.0, 0.25);
    CHECK(h.masses[0] == doctest::Approx(1.5));
    CHECK(h.masses[1] == doctest::Approx(2.0));
    CHECK(h.masses[3] == doctest::Approx(0.25));
    CHECK(h.total_mass == doctest::Approx(3.75));
    CHECK(measure_moments(h, 0) == doctest::Approx(3.75));
    CHECK(measure_moments(h, 1) == doctest::Approx(0.1 + 0.6 - 2.5 + 1.75));
    CHECK(measure_moments(h, 2) == doctest::Approx(0.01 + 0.18 + 12.5 + 12.25));
    CHECK_FALSE(h.concentration(0.99, 2).has_value());
    MomentumHistogram peaked = MomentumHistogram::uniform(-1.0, 1.0, 100);
    peaked.add(0.3, 1.0);
    peaked.add(0.305, 1.0);
    CHECK(peaked.concentration().value() == doctest::Approx(0.3025));
    CHECK_THROWS_AS(measure_moments(h, 3), InvalidArgument);
  }

  TEST_CASE("Bohmian and Wigner moments agree to orders 0 and 1") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ua(0.2, 1.0), uphi(0.0, 6.283185307179586), ug(-1.5, 1.5);
    const std::size_t samples = 200'000;
    const double tol = 3.0 / std::sqrt(static_cast<double>(samples));
    for (int rep = 0; rep < 6; ++rep) {
      const std::size_t n = 2 + rep % 3;
      std::vector<cplx> b(n);
      std::vector<double> grads(n);
      for (std::size_t j = 0; j < n; ++j) {
        b[j] = std::polar(ua(rng), uphi(rng));
        grads[j] = ug(rng) + 3.0 * static_cast<double>(j);
      }
      TorusSampling ts;
      ts.samples = samples;
      ts.seed = static_cast<std::uint64_t>(rep);
      const MomentumHistogram beta = limiting_bohmian_measure(b, grads, ts);
      const auto w = limiting_wigner_measure(b, grads);
      double mass = 0.0, gmax = 0.0;
      for (const auto& z : b) mass += std::norm(z);
      for (double v : grads) gmax = std::max(gmax, std::abs(v));
      CHECK(measure_moments(beta, 0) == doctest::Approx(mass).epsilon(tol));
      CHECK(std::abs(measure_moments(beta, 0) - measure_moments(w, 0)) <= tol * mass);
      CHECK(std::abs(measure_moments(beta, 1) - measure_moments(w, 1)) <= tol * mass * gmax);
      CHECK(measure_moments(w, 2) - measure_moments(beta, 2) > 0.1);
    }
  }

  TEST_CASE("two equal branches give a single Bohmian atom") {
    const std::vector<cplx> b{1.0, 1.0};
    const std::vector<double> g{0.0, 1.0};
    TorusSampling ts;
    ts.samples = 100'000;
    const MomentumHistogram beta = limiting_bohmian_measure(b, g, ts);
    CHECK(beta.concentration().value() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(measure_moments(beta, 2) / measure_moments(beta, 0) == doctest::Approx(0.25).epsilon(1e-9));
    const auto w = limiting_wigner_measure(b, g);
    CHECK(measure_moments(w, 2) / measure_moments(w, 0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(limiting_bohmian_measure(b, std::vector<double>{1.0, 1.0}, ts), InvalidArgument);
  }

  TEST_CASE("numerical Wigner transform of a Gaussian packet") {
    const double eps = 0.05, k = 0.4;
    const Grid g(-3.0, 6.0, 512);
    const WkbInitialData d{AmplitudeProfile::gaussian(0.0, 4.0), PhaseProfile::plane(k), std::nullopt};
    const Field f = init_state(g, d, eps);
    const WignerTransform w = wigner_transform_numeric(f, eps);
    CHECK(w.max_imag <= 1e-10 * w.max_abs);
    const auto xm = w.x_marginal();
    for (std::size_t i = 0; i < w.x.size(); ++i) CHECK(std::abs(xm[i] - std::norm(f[i])) <= 1e-8);
    double total = 0.0;
    for (double v : w.p_marginal(g.spacing())) total += v * w.dp();
    CHECK(total == doctest::Approx(mass(f)).epsilon(1e-6));
    // Closed form at x = 0 for a = exp(-c x^2): w = exp(-(p - k)^2 / (2 c eps^2)) / sqrt(2 pi c eps^2), c = 4.
    const std::size_t ix = g.size() / 2;
    REQUIRE(w.x[ix] == doctest::Approx(0.0));
    for (std::size_t ip = 0; ip < w.p.size(); ip += 7) {
      const double p = w.p[ip];
      const double exact = std::exp(-(p - k) * (p - k) / (8.0 * eps * eps)) / std::sqrt(3.141592653589793 * 8.0 * eps * eps);
      CHECK(std::abs(w.at(ix, ip) - exact) <= 1e-8);
    }
  }
}
