#pragma once

// Time-splitting spectral solver for  i eps psi_t = -(eps^2/2) psi_xx + V psi.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "semiclassical/profiles.hpp"
#include "semiclassical/spectral.hpp"

namespace scl {

/// External potential V(x): zero, harmonic (omega^2/2)(x - center)^2, or
/// tabulated on a grid (spectral interpolation and derivatives).
class Potential {
 public:
  enum class Kind { zero, harmonic, tabulated };

  static Potential zero();
  static Potential harmonic(double center, double omega);
  static Potential tabulated(const Grid& grid, std::vector<double> values);

  Kind kind() const noexcept { return kind_; }
  bool is_zero() const noexcept { return kind_ == Kind::zero; }
  double center() const noexcept { return center_; }
  double omega() const noexcept { return omega_; }

  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;

  /// V at every node of `grid`.
  std::vector<double> sample(const Grid& grid) const;

  std::string describe() const;

 private:
  struct Table;
  Potential(Kind kind, double center, double omega, std::shared_ptr<const Table> table)
      : kind_(kind), center_(center), omega_(omega), table_(std::move(table)) {}

  Kind kind_;
  double center_ = 0.0;
  double omega_ = 0.0;
  std::shared_ptr<const Table> table_;
};

struct SolverConfig {
  double epsilon = 1e-3;
  double dt = 1e-4;
  std::size_t steps = 1;
  std::size_t snapshot_stride = 1;

  void validate() const;
};

/// rho_floor = 1e-28 * max rho, the regularisation added to rho in every
/// division by the density.
double density_floor(const Field& f);

/// Samples a0(x_j) e^{i S0(x_j)/eps} (or the scaled wave packet). Warns through
/// the diagnostics sink when the spectral tail exceeds 1e-12.
Field init_state(const Grid& grid, const WkbInitialData& data, double epsilon);

Field kinetic_substep(const Field& f, double epsilon, double dt);
Field potential_substep(const Field& f, const Potential& v, double epsilon, double dt);

/// Half kinetic, full potential, half kinetic.
Field strang_step(const Field& f, const Potential& v, double epsilon, double dt);

/// Repeated Strang steps; the returned list starts with the input and holds a
/// snapshot every `snapshot_stride` steps plus the final state.
std::vector<Field> evolve(const Field& f, const Potential& v, const SolverConfig& cfg);

/// Strang stepper with the phase factors precomputed for a fixed dt.
class StrangPropagator {
 public:
  StrangPropagator(const Grid& grid, const Potential& v, double epsilon, double dt);

  /// One Strang step (exact kinetic propagation by dt when V = 0).
  Field step(const Field& f) const;

  double dt() const noexcept { return dt_; }

 private:
  Grid grid_;
  double dt_;
  bool free_;
  std::vector<cplx> half_kinetic_;   // FFT order
  std::vector<cplx> full_kinetic_;   // FFT order, used when V = 0
  std::vector<cplx> potential_phase_;
};

double mass(const Field& f);
double energy(const Field& f, const Potential& v, double epsilon);

struct KineticSplit {
  double transport;
  double quantum;
};
/// (1/2) int rho u^2 and (eps^2/2) int |d sqrt(rho)|^2; nodes with
/// rho < density_floor are skipped.
KineticSplit kinetic_split(const Field& f, double epsilon);
/// (eps^2/2) int |psi'|^2 by spectral differentiation.
double kinetic_energy(const Field& f, double epsilon);

/// Real samples on a grid; NaN marks a missing value.
struct RealField {
  Grid grid;
  std::vector<double> values;
  double time = 0.0;
};

/// -eps^2/(2 sqrt(rho)) (sqrt(rho))'' computed spectrally; NaN where rho is under the floor.
RealField bohm_potential(const Field& f, double epsilon);

}  // namespace scl
