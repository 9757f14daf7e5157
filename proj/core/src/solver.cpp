#include "semiclassical/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fft.hpp"
#include "semiclassical/diagnostics.hpp"
#include "semiclassical/error.hpp"

namespace scl {

// ---------------------------------------------------------------------------
// Potential

struct Potential::Table {
  Grid grid;
  std::vector<double> values;
  Interpolant v;
  Interpolant dv;
  Interpolant d2v;

  static Field as_field(const Grid& g, const std::vector<double>& vals) {
    std::vector<cplx> c(vals.begin(), vals.end());
    return Field(g, std::move(c));
  }

  Table(const Grid& g, std::vector<double> vals)
      : grid(g),
        values(std::move(vals)),
        v(as_field(g, values)),
        dv(spectral_derivative(as_field(g, values))),
        d2v(spectral_derivative(spectral_derivative(as_field(g, values)))) {}
};

Potential Potential::zero() { return Potential(Kind::zero, 0.0, 0.0, nullptr); }

Potential Potential::harmonic(double center, double omega) {
  if (!std::isfinite(center) || !std::isfinite(omega)) throw InvalidArgument("harmonic potential needs finite parameters");
  return Potential(Kind::harmonic, center, omega, nullptr);
}

Potential Potential::tabulated(const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) throw InvalidArgument("tabulated potential must have one value per node");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("tabulated potential has non-finite values");
  return Potential(Kind::tabulated, 0.0, 0.0, std::make_shared<const Table>(grid, std::move(values)));
}

double Potential::value(double x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::harmonic:
      return 0.5 * omega_ * omega_ * (x - center_) * (x - center_);
    case Kind::tabulated:
      return table_->v.value(x).real();
  }
  return 0.0;
}

double Potential::derivative(double x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::harmonic:
      return omega_ * omega_ * (x - center_);
    case Kind::tabulated:
      return table_->dv.value(x).real();
  }
  return 0.0;
}

double Potential::second_derivative(double x) const {
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::harmonic:
      return omega_ * omega_;
    case Kind::tabulated:
      return table_->d2v.value(x).real();
  }
  return 0.0;
}

std::vector<double> Potential::sample(const Grid& grid) const {
  if (kind_ == Kind::tabulated && grid == table_->grid) return table_->values;
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out[j] = value(grid.node(j));
  return out;
}

std::string Potential::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::zero:
      os << "zero";
      break;
    case Kind::harmonic:
      os << "harmonic(center=" << center_ << ", omega=" << omega_ << ")";
      break;
    case Kind::tabulated:
      os << "tabulated(" << table_->values.size() << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

void SolverConfig::validate() const {
  if (!(epsilon > 0.0) || epsilon > 1.0) throw InvalidArgument("epsilon must lie in (0, 1]");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (snapshot_stride == 0) throw InvalidArgument("snapshot stride must be >= 1");
}

double density_floor(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::norm(v));
  return 1e-28 * m;
}

Field init_state(const Grid& grid, const WkbInitialData& data, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const AmplitudeProfile amp = data.effective_amplitude(epsilon);
  const PhaseProfile phase = data.effective_phase();
  std::vector<cplx> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    const double a = amp.value(x);
    // Skip phase evaluation where the amplitude underflows (tables may not cover the grid).
    v[j] = a == 0.0 ? cplx{} : std::polar(a, phase.value(x) / epsilon);
  }
  Field f(grid, std::move(v), 0.0);
  const double tail = spectral_tail_ratio(f);
  if (tail > 1e-12) {
    std::ostringstream os;
    os << "initial state under-resolved: spectral tail ratio " << tail << " > 1e-12 (n=" << grid.size() << ")";
    warn(os.str());
  }
  return f;
}

Field kinetic_substep(const Field& f, double epsilon, double dt) {
  const Grid& g = f.grid();
  std::vector<cplx> c(f.size());
  detail::fft_forward(f.values(), c);
  const double inv_n = 1.0 / static_cast<double>(f.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double k = g.wavenumber(j);
    c[j] *= std::polar(inv_n, -0.5 * epsilon * k * k * dt);
  }
  std::vector<cplx> v(f.size());
  detail::fft_backward(c, v);
  return Field(g, std::move(v), f.time() + dt);
}

Field potential_substep(const Field& f, const Potential& v, double epsilon, double dt) {
  if (v.is_zero()) return f.with_time(f.time() + dt);
  const Grid& g = f.grid();
  const std::vector<double> vals = v.sample(g);
  std::vector<cplx> out(f.values().begin(), f.values().end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::polar(1.0, -vals[j] * dt / epsilon);
  return Field(g, std::move(out), f.time() + dt);
}

StrangPropagator::StrangPropagator(const Grid& grid, const Potential& v, double epsilon, double dt)
    : grid_(grid), dt_(dt), free_(v.is_zero()) {
  const std::size_t n = grid.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  half_kinetic_.resize(n);
  full_kinetic_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = grid.wavenumber(j);
    half_kinetic_[j] = std::polar(inv_n, -0.25 * epsilon * k * k * dt);
    full_kinetic_[j] = std::polar(inv_n, -0.5 * epsilon * k * k * dt);
  }
  if (!free_) {
    const std::vector<double> vals = v.sample(grid);
    potential_phase_.resize(n);
    for (std::size_t j = 0; j < n; ++j) potential_phase_[j] = std::polar(1.0, -vals[j] * dt / epsilon);
  }
}

Field StrangPropagator::step(const Field& f) const {
  const std::size_t n = grid_.size();
  std::vector<cplx> a(n), b(n);
  detail::fft_forward(f.values(), a);
  if (free_) {
    for (std::size_t j = 0; j < n; ++j) a[j] *= full_kinetic_[j];
    detail::fft_backward(a, b);
    return Field(grid_, std::move(b), f.time() + dt_);
  }
  for (std::size_t j = 0; j < n; ++j) a[j] *= half_kinetic_[j];
  detail::fft_backward(a, b);
  for (std::size_t j = 0; j < n; ++j) b[j] *= potential_phase_[j];
  detail::fft_forward(b, a);
  for (std::size_t j = 0; j < n; ++j) a[j] *= half_kinetic_[j];
  detail::fft_backward(a, b);
  return Field(grid_, std::move(b), f.time() + dt_);
}

Field strang_step(const Field& f, const Potential& v, double epsilon, double dt) {
  if (dt == 0.0) return f;
  return StrangPropagator(f.grid(), v, epsilon, dt).step(f);
}

std::vector<Field> evolve(const Field& f, const Potential& v, const SolverConfig& cfg) {
  cfg.validate();
  std::vector<Field> out{f};
  if (cfg.steps == 0) return out;
  const StrangPropagator prop(f.grid(), v, cfg.epsilon, cfg.dt);
  const double t0 = f.time();
  Field cur = f;
  for (std::size_t s = 1; s <= cfg.steps; ++s) {
    try {
      cur = prop.step(cur).with_time(t0 + static_cast<double>(s) * cfg.dt);
    } catch (const NumericalAbort& e) {
      throw NumericalAbort("evolve aborted at step " + std::to_string(s) + ": " + e.what());
    }
    if (s % cfg.snapshot_stride == 0 || s == cfg.steps) out.push_back(cur);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observables

double mass(const Field& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return sum * f.grid().spacing();
}

double kinetic_energy(const Field& f, double epsilon) {
  const Field d = spectral_derivative(f);
  double sum = 0.0;
  for (const auto& v : d.values()) sum += std::norm(v);
  return 0.5 * epsilon * epsilon * sum * f.grid().spacing();
}

double energy(const Field& f, const Potential& v, double epsilon) {
  double pot = 0.0;
  if (!v.is_zero()) {
    const std::vector<double> vals = v.sample(f.grid());
    for (std::size_t j = 0; j < f.size(); ++j) pot += vals[j] * std::norm(f[j]);
    pot *= f.grid().spacing();
  }
  return kinetic_energy(f, epsilon) + pot;
}

KineticSplit kinetic_split(const Field& f, double epsilon) {
  const Field d = spectral_derivative(f);
  const double floor = density_floor(f);
  double transport = 0.0, quantum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double rho = std::norm(f[j]);
    if (rho < floor || rho == 0.0) continue;
    const cplx w = std::conj(f[j]) * d[j];
    const double current = epsilon * w.imag();
    transport += 0.5 * current * current / rho;
    quantum += 0.5 * epsilon * epsilon * w.real() * w.real() / rho;
  }
  const double h = f.grid().spacing();
  return {transport * h, quantum * h};
}

RealField bohm_potential(const Field& f, double epsilon) {
  const Grid& g = f.grid();
  const double floor = density_floor(f);
  if (floor == 0.0) throw InvalidArgument("Bohm potential of a vanishing field is undefined");
  std::vector<cplx> amp(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) amp[j] = std::abs(f[j]);
  const Field root(g, std::move(amp), f.time());
  const Field lap = spectral_derivative(spectral_derivative(root));
  RealField out{g, std::vector<double>(f.size()), f.time()};
  std::size_t reported = 0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double rho = std::norm(f[j]);
    if (rho < floor) {
      out.values[j] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out.values[j] = -0.5 * epsilon * epsilon * lap[j].real() / root[j].real();
    ++reported;
  }
  if (reported == 0) throw InvalidArgument("every node is under the density floor");
  return out;
}

}  // namespace scl
