#include "semiclassical/bohmian.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <optional>
#include <thread>

#include "semiclassical/error.hpp"

namespace scl {

namespace {

// Runs body(begin, end) over [0, count) split into `threads` contiguous chunks.
template <class Body>
void parallel_chunks(std::size_t count, unsigned threads, Body&& body) {
  if (threads <= 1 || count < 2 * threads) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t begin = chunk; begin < count; begin += chunk)
    workers.emplace_back([&body, begin, end = std::min(count, begin + chunk)] { body(begin, end); });
  body(std::size_t{0}, std::min(count, chunk));
}

struct StageFields {
  Field half;
  Field full;
};

// V = 0: `full` propagates exactly by dt. Otherwise the end field is two
// half-dt Strang steps.
StageFields stage_fields(const Field& f_t, const StrangPropagator& half, const StrangPropagator* full) {
  Field mid = half.step(f_t);
  Field end = full ? full->step(f_t) : half.step(mid);
  return {std::move(mid), std::move(end)};
}

struct StageInterpolants {
  const Interpolant& start;
  double start_floor;
  const Interpolant& half;
  double half_floor;
  const Interpolant& full;
  double full_floor;
};

void rk4_positions(std::span<double> xs, const StageInterpolants& s, double epsilon, double dt, unsigned threads) {
  const std::size_t n = xs.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), probe(n);
  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    const std::size_t len = end - begin;
    const std::span<const double> x = xs.subspan(begin, len);
    const std::span<double> p(probe.data() + begin, len);
    const std::span<double> v1(k1.data() + begin, len), v2(k2.data() + begin, len), v3(k3.data() + begin, len),
        v4(k4.data() + begin, len);
    s.start.velocities(x, epsilon, s.start_floor, v1);
    for (std::size_t i = 0; i < len; ++i) p[i] = x[i] + 0.5 * dt * v1[i];
    s.half.velocities(p, epsilon, s.half_floor, v2);
    for (std::size_t i = 0; i < len; ++i) p[i] = x[i] + 0.5 * dt * v2[i];
    s.half.velocities(p, epsilon, s.half_floor, v3);
    for (std::size_t i = 0; i < len; ++i) p[i] = x[i] + dt * v3[i];
    s.full.velocities(p, epsilon, s.full_floor, v4);
  });
  for (std::size_t i = 0; i < n; ++i) {
    const double next = xs[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(next)) throw NumericalAbort("Bohmian trajectory " + std::to_string(i) + " became non-finite");
    xs[i] = next;
  }
}

}  // namespace

double velocity_at(const Field& f, double epsilon, double x) {
  return Interpolant(f).velocity(x, epsilon, density_floor(f));
}

Field advance_trajectories(std::span<double> positions, const Field& f_t, const Potential& v, double epsilon,
                           double dt, unsigned threads) {
  const StrangPropagator half(f_t.grid(), v, epsilon, 0.5 * dt);
  std::optional<StrangPropagator> full;
  if (v.is_zero()) full.emplace(f_t.grid(), v, epsilon, dt);
  StageFields stages = stage_fields(f_t, half, full ? &*full : nullptr);
  const Interpolant i0(f_t), i1(stages.half), i2(stages.full);
  rk4_positions(positions, {i0, density_floor(f_t), i1, density_floor(stages.half), i2, density_floor(stages.full)},
                epsilon, dt, threads);
  return std::move(stages.full);
}

BohmianIntegrator::BohmianIntegrator(Field initial, Potential v, double epsilon, double dt,
                                     std::vector<double> positions, unsigned threads)
    : field_(std::move(initial)),
      interp_(field_),
      floor_(density_floor(field_)),
      potential_(std::move(v)),
      epsilon_(epsilon),
      dt_(dt),
      positions_(std::move(positions)),
      threads_(std::max(1u, threads)),
      t0_(field_.time()),
      half_step_(field_.grid(), potential_, epsilon, 0.5 * dt) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (potential_.is_zero()) full_step_.emplace(field_.grid(), potential_, epsilon, dt);
}

void BohmianIntegrator::step() {
  StageFields stages = stage_fields(field_, half_step_, full_step_ ? &*full_step_ : nullptr);
  const Interpolant half(stages.half);
  Interpolant full(stages.full);
  const double half_floor = density_floor(stages.half);
  const double full_floor = density_floor(stages.full);
  rk4_positions(positions_, {interp_, floor_, half, half_floor, full, full_floor}, epsilon_, dt_, threads_);
  ++steps_done_;
  // Time stamps are exact multiples of dt.
  field_ = stages.full.with_time(t0_ + static_cast<double>(steps_done_) * dt_);
  interp_ = std::move(full);
  floor_ = full_floor;
}

std::vector<double> BohmianIntegrator::momenta() const {
  std::vector<double> p(positions_.size());
  interp_.velocities(positions_, epsilon_, floor_, p);
  return p;
}

TrajectoryBundle run_bohmian(const Field& initial, const Potential& v, const BohmianRunConfig& cfg,
                             const SeedSet& seeds, const SnapshotObserver& observer) {
  seeds.validate();
  if (cfg.snapshot_stride == 0) throw InvalidArgument("snapshot stride must be >= 1");
  std::vector<std::size_t> marks;
  for (std::size_t s = 0; s <= cfg.steps; s += cfg.snapshot_stride) marks.push_back(s);
  if (marks.back() != cfg.steps) marks.push_back(cfg.steps);
  std::vector<double> times(marks.size());
  for (std::size_t k = 0; k < marks.size(); ++k) times[k] = initial.time() + static_cast<double>(marks[k]) * cfg.dt;

  TrajectoryBundle bundle = TrajectoryBundle::allocate(seeds.seeds, times, false);
  bundle.epsilon = cfg.epsilon;

  BohmianIntegrator integ(initial, v, cfg.epsilon, cfg.dt, seeds.seeds, cfg.threads);
  std::size_t done = 0;
  for (std::size_t k = 0; k < marks.size(); ++k) {
    for (; done < marks[k]; ++done) {
      try {
        integ.step();
      } catch (const NumericalAbort& e) {
        throw NumericalAbort(std::string(e.what()) + " at step " + std::to_string(done + 1));
      }
    }
    const std::vector<double> p = integ.momenta();
    const auto x = integ.positions();
    for (std::size_t i = 0; i < x.size(); ++i) {
      bundle.x[bundle.index(i, k)] = x[i];
      bundle.p[bundle.index(i, k)] = p[i];
    }
    if (observer) observer(marks[k], integ.field(), x, p);
  }
  return bundle;
}

PushforwardResult pushforward_check(const TrajectoryBundle& bundle, const SeedSet& seeds, std::size_t time_index,
                                    const Field& f_t, const std::function<double(double)>& sigma) {
  if (seeds.size() != bundle.seed_count()) throw InvalidArgument("seed set does not match bundle");
  if (time_index >= bundle.time_count()) throw InvalidArgument("time index out of range");
  if (seeds.size() < 2) throw InvalidArgument("push-forward quadrature needs at least two seeds");

  double lhs = 0.0;
  const Grid& g = f_t.grid();
  for (std::size_t j = 0; j < g.size(); ++j) lhs += sigma(g.node(j)) * std::norm(f_t[j]);
  lhs *= g.spacing();

  const std::size_t m = seeds.size();
  const double dy = (seeds.seeds.back() - seeds.seeds.front()) / static_cast<double>(m - 1);
  double rhs = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = (i == 0 || i + 1 == m) ? 0.5 * dy : dy;
    rhs += w * sigma(bundle.x_at(i, time_index)) * seeds.weights[i];
  }
  return {lhs, rhs};
}

CrossingAudit non_crossing_audit(const TrajectoryBundle& bundle, double slack) {
  CrossingAudit audit;
  for (std::size_t k = 0; k < bundle.time_count(); ++k) {
    for (std::size_t i = 0; i + 1 < bundle.seed_count(); ++i) {
      if (bundle.x_at(i + 1, k) < bundle.x_at(i, k) - slack) {
        audit.ok = false;
        audit.time_index = k;
        audit.seed_index = i;
        return audit;
      }
    }
  }
  return audit;
}

double deviation_measure(const TrajectoryBundle& bohmian, const TrajectoryBundle& classical, double delta,
                         Window t_window) {
  if (bohmian.seed_count() != classical.seed_count() || bohmian.time_count() != classical.time_count())
    throw InvalidArgument("deviation_measure needs bundles on the same seeds and times");
  for (std::size_t i = 0; i < bohmian.seed_count(); ++i)
    if (std::abs(bohmian.seeds[i] - classical.seeds[i]) > 1e-12) throw InvalidArgument("bundle seeds differ");
  for (std::size_t k = 0; k < bohmian.time_count(); ++k)
    if (std::abs(bohmian.times[k] - classical.times[k]) > 1e-9) throw InvalidArgument("bundle times differ");

  std::size_t total = 0, far = 0;
  for (std::size_t k = 0; k < bohmian.time_count(); ++k) {
    const double t = bohmian.times[k];
    if (t < t_window.lo - 1e-12 || t > t_window.hi + 1e-12) continue;
    for (std::size_t i = 0; i < bohmian.seed_count(); ++i) {
      const double dx = bohmian.x_at(i, k) - classical.x_at(i, k);
      const double dp = bohmian.p_at(i, k) - classical.p_at(i, k);
      ++total;
      if (std::hypot(dx, dp) >= delta) ++far;
    }
  }
  if (total == 0) throw InvalidArgument("no snapshot times inside the deviation window");
  return static_cast<double>(far) / static_cast<double>(total);
}

double trajectory_difference(const TrajectoryBundle& a, const TrajectoryBundle& b) {
  if (a.seed_count() != b.seed_count()) throw InvalidArgument("bundles have different seed counts");
  double worst = 0.0;
  std::size_t kb = 0;
  std::size_t matched = 0;
  for (std::size_t ka = 0; ka < a.time_count(); ++ka) {
    const double t = a.times[ka];
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    while (kb < b.time_count() && b.times[kb] < t - tol) ++kb;
    if (kb == b.time_count()) break;
    if (std::abs(b.times[kb] - t) > tol) continue;
    ++matched;
    for (std::size_t i = 0; i < a.seed_count(); ++i)
      worst = std::max(worst, std::abs(a.x_at(i, ka) - b.x_at(i, kb)));
  }
  if (matched == 0) throw InvalidArgument("bundles share no snapshot times");
  return worst;
}

}  // namespace scl
