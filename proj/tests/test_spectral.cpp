#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "semiclassical/error.hpp"
#include "semiclassical/spectral.hpp"

using namespace scl;

namespace {

constexpr double kPi = std::numbers::pi;

Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(g.size());
  for (auto& z : v) z = {nd(rng), nd(rng)};
  return Field(g, v);
}

// Direct O(n) sum of the truncated series with the Nyquist mode split as a cosine.
cplx direct_series(const Spectrum& s, double x) {
  const Grid& g = s.grid();
  const int n = static_cast<int>(g.size());
  cplx sum = 0.0;
  for (int m = -n / 2 + 1; m < n / 2; ++m) sum += s.coefficient(m) * std::exp(cplx(0.0, g.wavenumber_of_mode(m) * (x - g.x0())));
  sum += s.coefficient(-n / 2) * std::cos(g.wavenumber_of_mode(n / 2) * (x - g.x0()));
  return sum;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid validation and mode bookkeeping") {
    CHECK_THROWS_AS(Grid(0.0, 1.0, 12), InvalidArgument);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 4), InvalidArgument);
    CHECK_THROWS_AS(Grid(0.0, -1.0, 16), InvalidArgument);
    const Grid g(-1.0, 2.0, 16);
    for (int m = -8; m < 8; ++m) CHECK(g.mode(g.index_of_mode(m)) == m);
    CHECK(g.wavenumber_of_mode(1) == doctest::Approx(kPi));
    CHECK(g.wrap(1.5) == doctest::Approx(-0.5));
    CHECK(g.wrap(-1.0) == doctest::Approx(-1.0));
    const auto k = g.wavenumbers();
    for (std::size_t i = 1; i < k.size(); ++i) CHECK(k[i] > k[i - 1]);
  }

  TEST_CASE("roundtrip and Parseval on seeded random fields") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {8u, 64u, 1024u}) {
      const Grid g(-3.0, 7.0, n);
      for (int rep = 0; rep < 5; ++rep) {
        const Field f = random_field(g, rng);
        const Spectrum s = to_spectrum(f);
        const Field back = from_spectrum(s, 0.0);
        double err = 0.0, norm = 0.0, cs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          err = std::max(err, std::abs(back[j] - f[j]));
          norm += std::norm(f[j]);
          cs += std::norm(s.coeffs()[j]);
        }
        CHECK(err <= 1e-12 * max_abs(f));
        CHECK(std::abs(norm - static_cast<double>(n) * cs) <= 1e-12 * norm);
      }
    }
  }

  TEST_CASE("derivative of a single Fourier mode is exact") {
    const Grid g(0.5, 3.0, 32);
    for (int m = -15; m < 16; ++m) {
      std::vector<cplx> v(g.size());
      const double k = g.wavenumber_of_mode(m);
      for (std::size_t j = 0; j < g.size(); ++j) v[j] = std::exp(cplx(0.0, k * (g.node(j) - g.x0())));
      const Field d = spectral_derivative(Field(g, v));
      double err = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(d[j] - cplx(0.0, k) * v[j]));
      CHECK(err <= 1e-12 * std::max(1.0, std::abs(k)));
    }
  }

  TEST_CASE("eval_at reproduces nodes, is periodic and matches the direct series") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-10.0, 10.0);
    const Grid g(-2.0, 5.0, 64);
    const Field f = random_field(g, rng);
    const Spectrum s = to_spectrum(f);
    const double scale = max_abs(f);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(eval_at(f, g.node(j)) - f[j]) <= 1e-12 * scale);
    const Interpolant interp(f);
    for (int i = 0; i < 50; ++i) {
      const double x = ux(rng);
      CHECK(std::abs(eval_at(f, x) - eval_at(f, x + g.length())) <= 1e-12 * scale);
      CHECK(std::abs(interp.value(x) - direct_series(s, x)) <= 1e-12 * scale);
    }
  }

  TEST_CASE("interpolant derivative and velocity of a smooth WKB state") {
    // a(x) = exp(-4x^2), S(x) = 0.3 x + 0.2 x^2 smooth and decaying: u = S'(x).
    const double eps = 0.05;
    const Grid g(-4.0, 8.0, 1024);
    std::vector<cplx> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g.node(j);
      v[j] = std::exp(-4.0 * x * x) * std::exp(cplx(0.0, (0.3 * x + 0.2 * x * x) / eps));
    }
    const Field f(g, v);
    const Interpolant interp(f);
    std::vector<double> xs, out(41);
    for (int i = 0; i <= 40; ++i) xs.push_back(-1.0 + 0.05 * i + 1e-3);
    interp.velocities(xs, eps, 0.0, out);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      const cplx psi = std::exp(-4.0 * x * x) * std::exp(cplx(0.0, (0.3 * x + 0.2 * x * x) / eps));
      const cplx dpsi = psi * cplx(-8.0 * x, (0.3 + 0.4 * x) / eps);
      const auto smp = interp.value_and_derivative(x);
      CHECK(std::abs(smp.value - psi) <= 1e-10);
      CHECK(std::abs(smp.derivative - dpsi) <= 1e-8 * std::abs(dpsi) + 1e-10);
      CHECK(out[i] == doctest::Approx(0.3 + 0.4 * x).epsilon(1e-9));
      CHECK(out[i] == doctest::Approx(interp.velocity(x, eps, 0.0)).epsilon(1e-12));
    }
  }

  TEST_CASE("tail diagnostics") {
    const Grid g(-8.0, 16.0, 256);
    std::vector<cplx> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) v[j] = std::exp(-g.node(j) * g.node(j));
    const Field smooth(g, v);
    CHECK(boundary_decay(smooth, 1e-10));
    CHECK(spectral_tail_ratio(smooth) < 1e-12);
    std::vector<cplx> w(g.size(), 1.0);
    w[g.size() / 2] = 2.0;
    const Field rough(g, w);
    CHECK_FALSE(boundary_decay(rough, 1e-10));
    CHECK(spectral_tail_ratio(rough) > 1e-3);
    CHECK(l2_norm(smooth) == doctest::Approx(std::sqrt(std::sqrt(kPi / 2.0))).epsilon(1e-12));
  }
}
