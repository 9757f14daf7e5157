#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "semiclassical/profiles.hpp"

namespace scl {

/// Strictly increasing initial positions with their initial densities rho0(y_i).
struct SeedSet {
  std::vector<double> seeds;
  std::vector<double> weights;

  /// `count` equispaced seeds on [lo, hi] weighted by |a0|^2.
  static SeedSet uniform(double lo, double hi, std::size_t count, const AmplitudeProfile& a0);
  /// Equispaced seeds over the interval where |a0| >= 1e-3 max |a0|.
  static SeedSet over_support(const AmplitudeProfile& a0, std::size_t count);

  std::size_t size() const noexcept { return seeds.size(); }
  void validate() const;
};

/// Positions and momenta of M trajectories at T common times, stored row-major
/// by seed: entry (i, k) is seed i at times[k].
struct TrajectoryBundle {
  std::vector<double> times;
  std::vector<double> seeds;
  std::vector<double> x;
  std::vector<double> p;
  /// Flow Jacobian dX/dy; filled for classical bundles only.
  std::vector<double> jac;
  /// Semiclassical parameter of a Bohmian bundle; empty for classical rays.
  std::optional<double> epsilon;

  std::size_t seed_count() const noexcept { return seeds.size(); }
  std::size_t time_count() const noexcept { return times.size(); }
  std::size_t index(std::size_t seed, std::size_t time) const noexcept { return seed * times.size() + time; }
  double x_at(std::size_t seed, std::size_t time) const { return x[index(seed, time)]; }
  double p_at(std::size_t seed, std::size_t time) const { return p[index(seed, time)]; }

  /// Empty bundle with storage for the given seeds and times.
  static TrajectoryBundle allocate(std::vector<double> seeds, std::vector<double> times, bool with_jacobian);
};

}  // namespace scl
