#include "semiclassical/trajectories.hpp"

#include <cmath>

#include "semiclassical/error.hpp"

namespace scl {

SeedSet SeedSet::uniform(double lo, double hi, std::size_t count, const AmplitudeProfile& a0) {
  if (count == 0) throw InvalidArgument("seed count must be positive");
  if (!(hi >= lo)) throw InvalidArgument("seed interval is empty");
  SeedSet s;
  s.seeds.resize(count);
  s.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double y = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    const double a = a0.value(y);
    s.seeds[i] = y;
    s.weights[i] = a * a;
  }
  s.validate();
  return s;
}

SeedSet SeedSet::over_support(const AmplitudeProfile& a0, std::size_t count) {
  const auto [lo, hi] = a0.support(1e-3);
  return uniform(lo, hi, count, a0);
}

void SeedSet::validate() const {
  if (seeds.size() != weights.size()) throw InvalidArgument("seed and weight counts differ");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!std::isfinite(seeds[i])) throw InvalidArgument("non-finite seed");
    if (!(weights[i] >= 0.0)) throw InvalidArgument("seed weights must be nonnegative");
    if (i > 0 && !(seeds[i] > seeds[i - 1])) throw InvalidArgument("seeds must be strictly increasing");
  }
}

TrajectoryBundle TrajectoryBundle::allocate(std::vector<double> seeds, std::vector<double> times, bool with_jacobian) {
  TrajectoryBundle b;
  b.seeds = std::move(seeds);
  b.times = std::move(times);
  const std::size_t total = b.seeds.size() * b.times.size();
  b.x.assign(total, 0.0);
  b.p.assign(total, 0.0);
  if (with_jacobian) b.jac.assign(total, 0.0);
  return b;
}

}  // namespace scl
