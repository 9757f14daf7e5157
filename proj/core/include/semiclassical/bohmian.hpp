#pragma once

// Bohmian trajectories X' = u(t, X), u = eps Im(psi'/psi), co-evolved with the
// spectral solver, and the audits built on them.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "semiclassical/classical_flow.hpp"
#include "semiclassical/solver.hpp"
#include "semiclassical/spectral.hpp"
#include "semiclassical/trajectories.hpp"

namespace scl {

/// Quantum velocity at an off-grid point, regularised by density_floor(f).
double velocity_at(const Field& f, double epsilon, double x);

/// One RK4 step of every position against the field f_t. Stage fields at
/// t + dt/2 and t + dt come from two half-dt Strang steps (exact kinetic
/// propagation when V = 0). Returns the field at t + dt.
Field advance_trajectories(std::span<double> positions, const Field& f_t, const Potential& v, double epsilon,
                           double dt, unsigned threads = 1);

/// Stateful co-evolution of a field and a set of trajectories; stage fields are
/// built once per step and shared by all trajectories.
class BohmianIntegrator {
 public:
  BohmianIntegrator(Field initial, Potential v, double epsilon, double dt, std::vector<double> positions,
                    unsigned threads = 1);

  void step();

  const Field& field() const noexcept { return field_; }
  double time() const noexcept { return field_.time(); }
  std::span<const double> positions() const noexcept { return positions_; }
  /// P = u(t, X) at the current positions.
  std::vector<double> momenta() const;

 private:
  Field field_;
  Interpolant interp_;
  double floor_;
  Potential potential_;
  double epsilon_;
  double dt_;
  std::vector<double> positions_;
  unsigned threads_;
  std::size_t steps_done_ = 0;
  double t0_;
  StrangPropagator half_step_;
  /// Exact kinetic step by dt, used when V = 0.
  std::optional<StrangPropagator> full_step_;
};

struct BohmianRunConfig {
  double epsilon = 1e-3;
  double dt = 1e-4;
  std::size_t steps = 1;
  std::size_t snapshot_stride = 1;
  unsigned threads = 1;
};

/// Called at every snapshot with the step index, the field and the current
/// positions/momenta.
using SnapshotObserver =
    std::function<void(std::size_t step, const Field& field, std::span<const double> x, std::span<const double> p)>;

/// Co-evolves field and trajectories over the full mesh, recording X and P at
/// step 0, every snapshot_stride steps and the final step.
TrajectoryBundle run_bohmian(const Field& initial, const Potential& v, const BohmianRunConfig& cfg,
                             const SeedSet& seeds, const SnapshotObserver& observer = {});

struct PushforwardResult {
  double lhs;
  double rhs;
};

/// int sigma rho(t) dx on the grid versus the trapezoid seed quadrature
/// sum sigma(X(t, y_i)) rho0(y_i) dy_i (uniform seeds required).
PushforwardResult pushforward_check(const TrajectoryBundle& bundle, const SeedSet& seeds, std::size_t time_index,
                                    const Field& f_t, const std::function<double(double)>& sigma);

struct CrossingAudit {
  bool ok = true;
  std::optional<std::size_t> time_index;
  /// Row i such that x[i+1] < x[i] - slack.
  std::optional<std::size_t> seed_index;
};

CrossingAudit non_crossing_audit(const TrajectoryBundle& bundle, double slack = 1e-9);

/// Fraction of lattice points (seed, snapshot time in window) where
/// |(X^eps, P^eps) - (X, P)| >= delta.
double deviation_measure(const TrajectoryBundle& bohmian, const TrajectoryBundle& classical, double delta,
                         Window t_window);

/// Max |X_a - X_b| over seeds and the times common to both bundles (matched by value).
double trajectory_difference(const TrajectoryBundle& a, const TrajectoryBundle& b);

}  // namespace scl
