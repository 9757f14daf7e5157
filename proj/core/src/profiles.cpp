#include "semiclassical/profiles.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semiclassical/error.hpp"

namespace scl {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

// ln cosh(z) without overflow.
double log_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double sech2(double z) {
  const double c = std::cosh(z);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct UniformTable {
  double x0;
  double h;
  std::vector<double> samples;
  Spline spline;

  UniformTable(double x0_, double h_, std::vector<double> s)
      : x0(x0_), h(h_), samples(std::move(s)), spline(samples.data(), samples.size(), x0_, h_) {}

  double x1() const { return x0 + h * static_cast<double>(samples.size() - 1); }
  bool contains(double x) const { return x >= x0 && x <= x1(); }
};

void check_table(double h, const std::vector<double>& samples, const char* what) {
  if (!(h > 0.0)) throw InvalidArgument(std::string(what) + " table spacing must be positive");
  if (samples.size() < 4) throw InvalidArgument(std::string(what) + " table needs at least 4 samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " table has non-finite samples");
}

}  // namespace

struct PhaseProfile::Table : UniformTable {
  using UniformTable::UniformTable;
};

struct AmplitudeProfile::Table : UniformTable {
  using UniformTable::UniformTable;
};

// ---------------------------------------------------------------------------
// PhaseProfile

PhaseProfile PhaseProfile::zero() { return PhaseProfile(Zero{}); }
PhaseProfile PhaseProfile::plane(double k, double origin) { return PhaseProfile(Plane{k, origin}); }
PhaseProfile PhaseProfile::quadratic(double s) { return PhaseProfile(Quadratic{s}); }

PhaseProfile PhaseProfile::logcosh(double alpha, double beta) {
  if (!(alpha > 0.0)) throw InvalidArgument("logcosh phase needs alpha > 0");
  return PhaseProfile(LogCosh{alpha, beta});
}

PhaseProfile PhaseProfile::table(double x0, double h, std::vector<double> samples) {
  check_table(h, samples, "phase");
  return PhaseProfile(std::make_shared<const Table>(x0, h, std::move(samples)));
}

double PhaseProfile::value(double x) const {
  return std::visit(
      overloaded{[](Zero) { return 0.0; },
                 [x](const Plane& p) { return p.k * (x - p.origin); },
                 [x](const Quadratic& q) { return q.s * x * x; },
                 [x](const LogCosh& l) { return -log_cosh(l.alpha * x - l.beta) / l.alpha; },
                 [x](const std::shared_ptr<const Table>& t) {
                   if (!t->contains(x)) throw InvalidArgument("phase table evaluated outside its range");
                   return t->spline(x);
                 }},
      v_);
}

double PhaseProfile::slope(double x) const {
  return std::visit(
      overloaded{[](Zero) { return 0.0; },
                 [](const Plane& p) { return p.k; },
                 [x](const Quadratic& q) { return 2.0 * q.s * x; },
                 [x](const LogCosh& l) { return -std::tanh(l.alpha * x - l.beta); },
                 [x](const std::shared_ptr<const Table>& t) {
                   if (!t->contains(x)) throw InvalidArgument("phase table evaluated outside its range");
                   return t->spline.prime(x);
                 }},
      v_);
}

double PhaseProfile::curvature(double x) const {
  return std::visit(
      overloaded{[](Zero) { return 0.0; },
                 [](const Plane&) { return 0.0; },
                 [](const Quadratic& q) { return 2.0 * q.s; },
                 [x](const LogCosh& l) { return -l.alpha * sech2(l.alpha * x - l.beta); },
                 [x](const std::shared_ptr<const Table>& t) {
                   if (!t->contains(x)) throw InvalidArgument("phase table evaluated outside its range");
                   return t->spline.double_prime(x);
                 }},
      v_);
}

std::optional<double> PhaseProfile::slope_bound() const {
  return std::visit(overloaded{[](Zero) -> std::optional<double> { return 0.0; },
                               [](const Plane& p) -> std::optional<double> { return std::abs(p.k); },
                               [](const Quadratic&) -> std::optional<double> { return std::nullopt; },
                               [](const LogCosh&) -> std::optional<double> { return 1.0; },
                               [](const std::shared_ptr<const Table>&) -> std::optional<double> {
                                 return std::nullopt;
                               }},
                    v_);
}

std::optional<std::pair<double, double>> PhaseProfile::domain() const {
  if (const auto* t = std::get_if<std::shared_ptr<const Table>>(&v_))
    return std::pair{(*t)->x0, (*t)->x1()};
  return std::nullopt;
}

bool PhaseProfile::is_table() const { return std::holds_alternative<std::shared_ptr<const Table>>(v_); }

std::string PhaseProfile::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](Zero) { os << "zero"; },
                        [&](const Plane& p) { os << "plane(k=" << p.k << ", origin=" << p.origin << ")"; },
                        [&](const Quadratic& q) { os << "quadratic(s=" << q.s << ")"; },
                        [&](const LogCosh& l) { os << "logcosh(alpha=" << l.alpha << ", beta=" << l.beta << ")"; },
                        [&](const std::shared_ptr<const Table>& t) { os << "table(" << t->samples.size() << ")"; }},
             v_);
  return os.str();
}

// ---------------------------------------------------------------------------
// AmplitudeProfile

AmplitudeProfile AmplitudeProfile::gaussian(double center, double c) {
  return polynomial_gaussian(center, c, {1.0});
}

AmplitudeProfile AmplitudeProfile::polynomial_gaussian(double center, double c, std::vector<double> coeffs) {
  if (!(c > 0.0)) throw InvalidArgument("gaussian amplitude needs a positive width exponent");
  if (coeffs.empty()) throw InvalidArgument("polynomial amplitude needs at least one coefficient");
  return AmplitudeProfile(PolyGaussian{center, c, std::move(coeffs)});
}

AmplitudeProfile AmplitudeProfile::table(double x0, double h, std::vector<double> samples) {
  check_table(h, samples, "amplitude");
  return AmplitudeProfile(std::make_shared<const Table>(x0, h, std::move(samples)));
}

double AmplitudeProfile::value(double x) const {
  return std::visit(overloaded{[x](const PolyGaussian& g) {
                                 const double z = x - g.center;
                                 double p = 0.0;
                                 for (auto it = g.coeffs.rbegin(); it != g.coeffs.rend(); ++it) p = p * z + *it;
                                 return p * std::exp(-g.c * z * z);
                               },
                               [x](const std::shared_ptr<const Table>& t) {
                                 return t->contains(x) ? t->spline(x) : 0.0;
                               }},
                    v_);
}

double AmplitudeProfile::derivative(double x) const {
  return std::visit(overloaded{[x](const PolyGaussian& g) {
                                 const double z = x - g.center;
                                 double p = 0.0, dp = 0.0;
                                 for (auto it = g.coeffs.rbegin(); it != g.coeffs.rend(); ++it) {
                                   dp = dp * z + p;
                                   p = p * z + *it;
                                 }
                                 return (dp - 2.0 * g.c * z * p) * std::exp(-g.c * z * z);
                               },
                               [x](const std::shared_ptr<const Table>& t) {
                                 return t->contains(x) ? t->spline.prime(x) : 0.0;
                               }},
                    v_);
}

std::pair<double, double> AmplitudeProfile::scan_window() const {
  return std::visit(overloaded{[](const PolyGaussian& g) {
                                 // exp(-c z^2) < 1e-300 beyond this radius for any polynomial of modest degree.
                                 const double r = std::sqrt((700.0 + 10.0 * static_cast<double>(g.coeffs.size())) / g.c);
                                 return std::pair{g.center - r, g.center + r};
                               },
                               [](const std::shared_ptr<const Table>& t) { return std::pair{t->x0, t->x1()}; }},
                    v_);
}

double AmplitudeProfile::peak() const {
  if (const auto* g = std::get_if<PolyGaussian>(&v_); g && g->coeffs.size() == 1) return std::abs(g->coeffs[0]);
  const auto [a, b] = scan_window();
  constexpr int samples = 200001;
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = a + (b - a) * i / (samples - 1);
    best = std::max(best, std::abs(value(x)));
  }
  return best;
}

std::pair<double, double> AmplitudeProfile::support(double rel_threshold) const {
  const double level = rel_threshold * peak();
  auto above = [&](double x) { return std::abs(value(x)) >= level; };
  if (const auto* g = std::get_if<PolyGaussian>(&v_); g && g->coeffs.size() == 1) {
    const double r = std::sqrt(-std::log(rel_threshold) / g->c);
    return {g->center - r, g->center + r};
  }
  const auto [a, b] = scan_window();
  constexpr int samples = 200001;
  const double step = (b - a) / (samples - 1);
  int first = -1, last = -1;
  for (int i = 0; i < samples; ++i) {
    if (above(a + step * i)) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) throw InvalidArgument("amplitude is identically zero");
  auto refine = [&](double inside, double outside) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (inside + outside);
      (above(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  const double lo = first == 0 ? a : refine(a + step * first, a + step * (first - 1));
  const double hi = last == samples - 1 ? b : refine(a + step * last, a + step * (last + 1));
  return {lo, hi};
}

std::optional<AmplitudeProfile::PolyGaussian> AmplitudeProfile::as_poly_gaussian() const {
  if (const auto* g = std::get_if<PolyGaussian>(&v_)) return *g;
  return std::nullopt;
}

std::string AmplitudeProfile::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const PolyGaussian& g) {
                          os << "polygaussian(center=" << g.center << ", c=" << g.c << ", degree="
                             << g.coeffs.size() - 1 << ")";
                        },
                        [&](const std::shared_ptr<const Table>& t) { os << "table(" << t->samples.size() << ")"; }},
             v_);
  return os.str();
}

// ---------------------------------------------------------------------------

AmplitudeProfile WkbInitialData::effective_amplitude(double epsilon) const {
  if (!wavepacket) return amplitude;
  const auto g = amplitude.as_poly_gaussian();
  if (!g) throw InvalidArgument("wave-packet initial data needs a polynomial-Gaussian profile");
  // eps^{-1/4} P((x - x0)/sqrt(eps)) exp(-(c/eps)(x - x0)^2), with g.center as the z-offset.
  const double root = std::sqrt(epsilon);
  std::vector<double> coeffs(g->coeffs.size());
  // P(z - z0) with z = (x - x0)/sqrt(eps); only z0 = 0 profiles are supported.
  if (g->center != 0.0) throw InvalidArgument("wave-packet profile must be centred at z = 0");
  double scale = std::pow(epsilon, -0.25);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] = g->coeffs[i] * scale;
    scale /= root;
  }
  return AmplitudeProfile::polynomial_gaussian(wavepacket->center, g->c / epsilon, std::move(coeffs));
}

PhaseProfile WkbInitialData::effective_phase() const {
  if (!wavepacket) return phase;
  return PhaseProfile::plane(wavepacket->momentum, wavepacket->center);
}

}  // namespace scl
