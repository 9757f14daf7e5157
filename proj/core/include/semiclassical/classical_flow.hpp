#pragma once

// Classical Hamiltonian rays X' = P, P' = -V'(X), their Jacobian, caustic onset
// and the single-phase WKB reconstruction valid before the first caustic.

#include <limits>
#include <optional>
#include <vector>

#include "semiclassical/profiles.hpp"
#include "semiclassical/solver.hpp"
#include "semiclassical/trajectories.hpp"

namespace scl {

struct FlowSample {
  double t;
  double y;
  double x;
  double p;
  /// dX/dy
  double jac;
  /// int_0^t (P^2/2 - V(X)) dtau along the ray.
  double action = 0.0;
};

/// V = 0 closed form: x = y + t S0'(y), p = S0'(y), jac = 1 + t S0''(y).
FlowSample flow_free(double t, double y, const PhaseProfile& phase);

/// RK4 on (X, P, dX, dP, action) with dX(0) = 1, dP(0) = S0''(y). The step is
/// dt shortened so that t is hit exactly.
FlowSample flow_ode(double t, double y, const PhaseProfile& phase, const Potential& v, double dt);

/// Phase, potential and integration step of a classical problem.
struct ClassicalSystem {
  PhaseProfile phase;
  Potential potential;
  double dt = 1e-3;

  /// flow_free when V = 0, flow_ode otherwise.
  FlowSample flow(double t, double y) const;
};

struct Window {
  double lo;
  double hi;
};

struct CausticReport {
  double t_star = std::numeric_limits<double>::infinity();
  double x_star = std::numeric_limits<double>::quiet_NaN();
  double y_star = std::numeric_limits<double>::quiet_NaN();
  Window y_window{};
  Window t_window{};

  bool found() const noexcept { return t_star < std::numeric_limits<double>::infinity(); }
};

struct CausticScan {
  std::size_t seeds = 400;
  std::size_t times = 400;
};

/// First time the Jacobian changes sign inside the (y, t) window; t_star is
/// +infinity when it stays positive.
CausticReport caustic_onset(const ClassicalSystem& sys, Window y_window, Window t_window,
                            CausticScan scan = {});

/// Unique y with X(t, y) = x. Throws CausticError when t >= t_star (if given)
/// or the Jacobian is not positive at the root.
double invert_flow(double t, double x, const ClassicalSystem& sys,
                   std::optional<double> t_star = std::nullopt);

/// S(t, x) = S0(Y) + int (P^2/2 - V) along the ray through (t, x).
double wkb_phase(double t, double x, const ClassicalSystem& sys);
/// a0(Y) / sqrt(J_t(Y)).
cplx wkb_amplitude(double t, double x, const AmplitudeProfile& a0, const ClassicalSystem& sys);
/// |a0(Y)|^2 / J_t(Y).
double wkb_density(double t, double x, const AmplitudeProfile& a0, const ClassicalSystem& sys);

/// Rays from every seed recorded at t_k = k * stride * dt, k = 0..steps/stride
/// (plus the final step). Stores X, P and the Jacobian.
TrajectoryBundle classical_bundle(const ClassicalSystem& sys, const std::vector<double>& seeds,
                                  std::size_t steps, std::size_t stride);

}  // namespace scl
