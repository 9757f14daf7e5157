#include "semiclassical/classical_flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semiclassical/error.hpp"

namespace scl {

namespace {

struct RayState {
  double x, p, dx, dp, action;
};

RayState derivative(const RayState& s, const Potential& v) {
  return {s.p, -v.derivative(s.x), s.dp, -v.second_derivative(s.x) * s.dx, 0.5 * s.p * s.p - v.value(s.x)};
}

RayState axpy(const RayState& s, double h, const RayState& k) {
  return {s.x + h * k.x, s.p + h * k.p, s.dx + h * k.dx, s.dp + h * k.dp, s.action + h * k.action};
}

RayState rk4_step(const RayState& s, const Potential& v, double h) {
  const RayState k1 = derivative(s, v);
  const RayState k2 = derivative(axpy(s, 0.5 * h, k1), v);
  const RayState k3 = derivative(axpy(s, 0.5 * h, k2), v);
  const RayState k4 = derivative(axpy(s, h, k3), v);
  auto comb = [h](double a, double b1, double b2, double b3, double b4) {
    return a + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
  };
  return {comb(s.x, k1.x, k2.x, k3.x, k4.x), comb(s.p, k1.p, k2.p, k3.p, k4.p),
          comb(s.dx, k1.dx, k2.dx, k3.dx, k4.dx), comb(s.dp, k1.dp, k2.dp, k3.dp, k4.dp),
          comb(s.action, k1.action, k2.action, k3.action, k4.action)};
}

RayState initial_ray(double y, const PhaseProfile& phase) {
  return {y, phase.slope(y), 1.0, phase.curvature(y), 0.0};
}

void check_finite(const RayState& s, double y) {
  if (!std::isfinite(s.x) || !std::isfinite(s.p) || !std::isfinite(s.dx) || !std::isfinite(s.dp))
    throw NumericalAbort("classical ray from y=" + std::to_string(y) + " became non-finite");
}

}  // namespace

FlowSample flow_free(double t, double y, const PhaseProfile& phase) {
  const double p = phase.slope(y);
  return {t, y, y + t * p, p, 1.0 + t * phase.curvature(y), 0.5 * p * p * t};
}

FlowSample flow_ode(double t, double y, const PhaseProfile& phase, const Potential& v, double dt) {
  if (!(t >= 0.0)) throw InvalidArgument("flow time must be nonnegative");
  if (!(dt > 0.0)) throw InvalidArgument("flow step must be positive");
  RayState s = initial_ray(y, phase);
  if (t > 0.0) {
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(t / dt - 1e-9)));
    const double h = t / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) s = rk4_step(s, v, h);
    check_finite(s, y);
  }
  return {t, y, s.x, s.p, s.dx, s.action};
}

FlowSample ClassicalSystem::flow(double t, double y) const {
  return potential.is_zero() ? flow_free(t, y, phase) : flow_ode(t, y, phase, potential, dt);
}

// ---------------------------------------------------------------------------
// Caustic onset

namespace {

// First zero of jac(., y) in [a, b] given jac(a) > 0 >= jac(b).
double bisect_crossing(const ClassicalSystem& sys, double y, double a, double b) {
  for (int it = 0; it < 80 && b - a > 1e-13 * std::max(1.0, b); ++it) {
    const double mid = 0.5 * (a + b);
    (sys.flow(mid, y).jac > 0.0 ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace

CausticReport caustic_onset(const ClassicalSystem& sys, Window y_window, Window t_window, CausticScan scan) {
  if (!(y_window.hi > y_window.lo) || !(t_window.hi > t_window.lo) || !std::isfinite(y_window.hi - y_window.lo) ||
      !std::isfinite(t_window.hi - t_window.lo))
    throw InvalidArgument("caustic scan windows must be finite and non-empty");
  if (scan.seeds < 3 || scan.times < 2) throw InvalidArgument("caustic scan lattice too small");

  CausticReport report;
  report.y_window = y_window;
  report.t_window = t_window;

  const std::size_t ny = scan.seeds, nt = scan.times;
  std::vector<double> ys(ny), ts(nt);
  for (std::size_t i = 0; i < ny; ++i) ys[i] = y_window.lo + (y_window.hi - y_window.lo) * i / (ny - 1);
  for (std::size_t k = 0; k < nt; ++k) ts[k] = t_window.lo + (t_window.hi - t_window.lo) * k / (nt - 1);

  // jac[i][k] on the lattice; rays with V != 0 are integrated once per seed.
  std::vector<double> jac(ny * nt);
  for (std::size_t i = 0; i < ny; ++i) {
    if (sys.potential.is_zero()) {
      for (std::size_t k = 0; k < nt; ++k) jac[i * nt + k] = flow_free(ts[k], ys[i], sys.phase).jac;
      continue;
    }
    RayState s = initial_ray(ys[i], sys.phase);
    double t = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const double target = ts[k];
      if (target > t) {
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((target - t) / sys.dt - 1e-9)));
        const double h = (target - t) / static_cast<double>(steps);
        for (std::size_t q = 0; q < steps; ++q) s = rk4_step(s, sys.potential, h);
        check_finite(s, ys[i]);
        t = target;
      }
      jac[i * nt + k] = s.dx;
    }
  }

  for (std::size_t i = 0; i < ny; ++i)
    if (!(jac[i * nt] > 0.0)) throw InvalidArgument("flow Jacobian is not positive at the start of the time window");

  std::size_t first = nt;
  for (std::size_t k = 1; k < nt && first == nt; ++k)
    for (std::size_t i = 0; i < ny; ++i)
      if (jac[i * nt + k] <= 0.0) {
        first = k;
        break;
      }
  if (first == nt) return report;

  // Earliest crossing among the lattice seeds that cross in (t_{k-1}, t_k].
  double best_t = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < ny; ++i) {
    if (jac[i * nt + first] > 0.0) continue;
    const double tc = bisect_crossing(sys, ys[i], ts[first - 1], ts[first]);
    if (tc < best_t) {
      best_t = tc;
      best_i = i;
    }
  }

  // Golden-section refinement of the crossing time over the neighbouring seeds.
  const double t_lo = ts[first - 1];
  const double t_hi = first + 1 < nt ? ts[first + 1] : ts[first];
  auto crossing = [&](double y) {
    if (sys.flow(t_hi, y).jac > 0.0) return std::numeric_limits<double>::infinity();
    if (sys.flow(t_lo, y).jac <= 0.0) return t_lo;
    return bisect_crossing(sys, y, t_lo, t_hi);
  };
  double a = ys[best_i == 0 ? 0 : best_i - 1];
  double b = ys[std::min(best_i + 1, ny - 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = crossing(c), fd = crossing(d);
  for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = crossing(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = crossing(d);
    }
  }
  double y_star = 0.5 * (a + b);
  double t_star = crossing(y_star);
  if (!(t_star <= best_t)) {
    y_star = ys[best_i];
    t_star = best_t;
  }

  report.t_star = t_star;
  report.y_star = y_star;
  report.x_star = sys.flow(t_star, y_star).x;
  return report;
}

// ---------------------------------------------------------------------------
// Inversion and single-phase WKB

double invert_flow(double t, double x, const ClassicalSystem& sys, std::optional<double> t_star) {
  if (t_star && t >= *t_star) throw CausticError("invert_flow requested at or after the caustic onset time");
  if (t == 0.0) return x;

  auto residual = [&](double y) { return sys.flow(t, y).x - x; };
  double lo = x - 1.0, hi = x + 1.0;
  double flo = residual(lo), fhi = residual(hi);
  for (int it = 0; it < 64 && flo > 0.0; ++it) {
    lo -= (hi - lo);
    flo = residual(lo);
  }
  for (int it = 0; it < 64 && fhi < 0.0; ++it) {
    hi += (hi - lo);
    fhi = residual(hi);
  }
  if (!(flo <= 0.0 && fhi >= 0.0)) throw CausticError("could not bracket the inverse flow");

  for (int it = 0; it < 200 && hi - lo > 1e-9 * std::max(1.0, std::abs(x)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? hi : lo) = mid;
  }
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 20; ++it) {
    const FlowSample s = sys.flow(t, y);
    if (!(s.jac > 0.0)) throw CausticError("flow Jacobian is not positive: caustic reached");
    const double r = s.x - x;
    if (std::abs(r) <= 1e-13 * std::max(1.0, std::abs(x))) break;
    const double next = y - r / s.jac;
    y = std::clamp(next, lo, hi);
  }
  const FlowSample s = sys.flow(t, y);
  if (!(s.jac > 0.0)) throw CausticError("flow Jacobian is not positive: caustic reached");
  if (std::abs(s.x - x) > 1e-10) throw CausticError("inverse flow did not converge (multi-valued map?)");
  return y;
}

double wkb_phase(double t, double x, const ClassicalSystem& sys) {
  const double y = invert_flow(t, x, sys);
  if (sys.potential.is_zero()) {
    const double p = sys.phase.slope(y);
    return sys.phase.value(y) + 0.5 * t * p * p;
  }
  return sys.phase.value(y) + sys.flow(t, y).action;
}

cplx wkb_amplitude(double t, double x, const AmplitudeProfile& a0, const ClassicalSystem& sys) {
  const double y = invert_flow(t, x, sys);
  const double j = sys.flow(t, y).jac;
  if (!(j > 0.0)) throw CausticError("flow Jacobian is not positive: caustic reached");
  return a0.value(y) / std::sqrt(j);
}

double wkb_density(double t, double x, const AmplitudeProfile& a0, const ClassicalSystem& sys) {
  const double y = invert_flow(t, x, sys);
  const double j = sys.flow(t, y).jac;
  if (!(j > 0.0)) throw CausticError("flow Jacobian is not positive: caustic reached");
  const double a = a0.value(y);
  return a * a / j;
}

TrajectoryBundle classical_bundle(const ClassicalSystem& sys, const std::vector<double>& seeds, std::size_t steps,
                                  std::size_t stride) {
  if (stride == 0) throw InvalidArgument("snapshot stride must be >= 1");
  std::vector<std::size_t> marks;
  for (std::size_t s = 0; s <= steps; s += stride) marks.push_back(s);
  if (marks.back() != steps) marks.push_back(steps);
  std::vector<double> times(marks.size());
  for (std::size_t k = 0; k < marks.size(); ++k) times[k] = static_cast<double>(marks[k]) * sys.dt;

  TrajectoryBundle b = TrajectoryBundle::allocate(seeds, times, true);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (sys.potential.is_zero()) {
      for (std::size_t k = 0; k < times.size(); ++k) {
        const FlowSample f = flow_free(times[k], seeds[i], sys.phase);
        b.x[b.index(i, k)] = f.x;
        b.p[b.index(i, k)] = f.p;
        b.jac[b.index(i, k)] = f.jac;
      }
      continue;
    }
    RayState s = initial_ray(seeds[i], sys.phase);
    std::size_t done = 0;
    for (std::size_t k = 0; k < marks.size(); ++k) {
      for (; done < marks[k]; ++done) s = rk4_step(s, sys.potential, sys.dt);
      check_finite(s, seeds[i]);
      b.x[b.index(i, k)] = s.x;
      b.p[b.index(i, k)] = s.p;
      b.jac[b.index(i, k)] = s.dx;
    }
  }
  return b;
}

}  // namespace scl
