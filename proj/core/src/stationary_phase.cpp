#include "semiclassical/stationary_phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semiclassical/error.hpp"

namespace scl {

namespace {

Window root_window(double t, double x, const PhaseProfile& phase, const StationaryPointOptions& opts) {
  if (opts.window) return *opts.window;
  if (auto d = phase.domain()) return {d->first, d->second};
  if (auto b = phase.slope_bound()) {
    // |y - x| = t |S0'(y)| <= t b for every root.
    const double r = t * *b + 0.5;
    return {x - r, x + r};
  }
  auto g = [&](double y) { return y + t * phase.slope(y) - x; };
  double w = 4.0 * (1.0 + std::abs(x));
  for (int it = 0; it < 60 && std::signbit(g(-w)) == std::signbit(g(w)); ++it) w *= 2.0;
  return {-w, w};
}

}  // namespace

std::vector<double> stationary_points(double t, double x, const PhaseProfile& phase,
                                      const StationaryPointOptions& opts) {
  if (!(t > 0.0)) throw InvalidArgument("stationary points need t > 0");
  if (opts.scan_samples < 2) throw InvalidArgument("stationary point scan needs at least two samples");
  const Window w = root_window(t, x, phase, opts);
  auto g = [&](double y) { return y + t * phase.slope(y) - x; };
  auto dg = [&](double y) { return 1.0 + t * phase.curvature(y); };

  const std::size_t n = opts.scan_samples;
  const double step = (w.hi - w.lo) / static_cast<double>(n - 1);
  std::vector<double> roots;
  double y_prev = w.lo;
  double g_prev = g(y_prev);
  auto refine = [&](double a, double b, double ga) {
    for (int it = 0; it < 200 && b - a > 4e-16 * std::max(1.0, std::abs(a)); ++it) {
      const double mid = 0.5 * (a + b);
      const double gm = g(mid);
      if (gm == 0.0) return mid;
      if (std::signbit(gm) == std::signbit(ga)) {
        a = mid;
        ga = gm;
      } else {
        b = mid;
      }
    }
    double y = 0.5 * (a + b);
    for (int it = 0; it < 3; ++it) {
      const double d = dg(y);
      if (std::abs(d) < 1e-8) break;
      const double next = y - g(y) / d;
      if (next < a || next > b) break;
      y = next;
    }
    return y;
  };

  if (g_prev == 0.0) roots.push_back(y_prev);
  for (std::size_t i = 1; i < n; ++i) {
    const double y = i + 1 == n ? w.hi : w.lo + step * static_cast<double>(i);
    const double gy = g(y);
    if (gy == 0.0) {
      roots.push_back(y);
    } else if (g_prev != 0.0 && std::signbit(gy) != std::signbit(g_prev)) {
      roots.push_back(refine(y_prev, y, g_prev));
    }
    y_prev = y;
    g_prev = gy;
  }

  for (double y : roots) {
    if (std::abs(dg(y)) < 1e-8) throw CausticError("degenerate stationary point: (t, x) is on the caustic set");
    if (std::abs(g(y)) > 1e-12 * std::max(1.0, std::abs(x)))
      throw CausticError("stationary point did not converge: (t, x) is too close to a caustic");
  }
  return roots;
}

BranchSet branch_set(double t, double x, const AmplitudeProfile& a0, const PhaseProfile& phase,
                     const StationaryPointOptions& opts) {
  BranchSet bs{t, x, {}};
  for (double y : stationary_points(t, x, phase, opts)) {
    const double slope = phase.slope(y);
    const double jac = 1.0 + t * phase.curvature(y);
    Branch b;
    b.y = y;
    b.phase = phase.value(y) + 0.5 * t * slope * slope;
    b.amplitude = a0.value(y) / std::sqrt(std::abs(jac));
    b.m_minus = jac < 0.0 ? 1 : 0;
    b.grad = slope;
    bs.branches.push_back(b);
  }
  return bs;
}

cplx maslov_factor(int m_minus) {
  switch (((m_minus % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, -1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, 1.0};
  }
}

std::vector<cplx> branch_weights(const BranchSet& bs) {
  std::vector<cplx> b;
  b.reserve(bs.size());
  for (const Branch& br : bs.branches) b.push_back(br.amplitude * maslov_factor(br.m_minus));
  return b;
}

cplx multiphase_eval(const BranchSet& bs, double epsilon) {
  cplx sum{};
  for (const Branch& br : bs.branches)
    sum += br.amplitude * maslov_factor(br.m_minus) * std::polar(1.0, br.phase / epsilon);
  return sum;
}

cplx oscillatory_integral_oracle(double t, double x, double epsilon, const AmplitudeProfile& a0,
                                 const PhaseProfile& phase, const OracleOptions& opts) {
  if (!(t > 0.0)) throw InvalidArgument("oscillatory integral needs t > 0");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  auto [lo, hi] = a0.support(opts.support_threshold);
  if (auto d = phase.domain()) {
    lo = std::max(lo, d->first);
    hi = std::min(hi, d->second);
  }

  // Largest |d Phi / dy| on the interval bounds the local oscillation frequency.
  double slope_max = 0.0;
  if (auto b = phase.slope_bound()) {
    slope_max = *b;
  } else {
    for (int i = 0; i <= 1000; ++i) slope_max = std::max(slope_max, std::abs(phase.slope(lo + (hi - lo) * i / 1000.0)));
  }
  const double dphi = slope_max + std::max(std::abs(lo - x), std::abs(hi - x)) / t;
  const double period = 2.0 * std::numbers::pi * epsilon / std::max(dphi, 1e-300);

  double h = period / opts.points_per_period;
  auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / h));
  if (intervals > opts.max_points) {
    intervals = opts.max_points;
    if (period / ((hi - lo) / static_cast<double>(intervals)) < 10.0)
      throw UnderResolved("oscillatory integral would have fewer than 10 points per phase period");
  }
  intervals = std::max<std::size_t>(intervals, 16);
  h = (hi - lo) / static_cast<double>(intervals);

  cplx sum{};
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double y = lo + h * static_cast<double>(i);
    const double w = (i == 0 || i == intervals) ? 0.5 : 1.0;
    const double arg = (phase.value(y) + (x - y) * (x - y) / (2.0 * t)) / epsilon;
    sum += w * a0.value(y) * std::polar(1.0, arg);
  }
  const cplx prefactor = std::polar(1.0 / std::sqrt(2.0 * std::numbers::pi * epsilon * t), -std::numbers::pi / 4.0);
  return prefactor * sum * h;
}

}  // namespace scl
