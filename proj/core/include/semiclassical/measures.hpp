#pragma once

// Limiting phase-space measures of multi-phase WKB states: the torus formula
// for the Bohmian measure, the atomic Wigner measure, and a numerical
// eps-scaled Wigner transform of a field.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "semiclassical/spectral.hpp"
#include "semiclassical/stationary_phase.hpp"

namespace scl {

/// Mass per momentum bin. Each bin also accumulates the exact sums of w p and
/// w p^2 of its samples, which is what measure_moments reads.
struct MomentumHistogram {
  std::vector<double> bin_edges;
  std::vector<double> masses;
  std::vector<double> first_moments;
  std::vector<double> second_moments;
  double total_mass = 0.0;

  static MomentumHistogram uniform(double lo, double hi, std::size_t bins);

  std::size_t bins() const noexcept { return masses.size(); }
  /// Adds weight w at momentum p; momenta outside the edges land in the end bins.
  void add(double p, double w);

  /// Mean momentum of the heaviest run of <= max_bins adjacent bins holding
  /// >= fraction of the mass; empty when the measure is diffuse.
  std::optional<double> concentration(double fraction = 0.99, std::size_t max_bins = 2) const;
};

struct Atom {
  double p;
  double mass;
};

struct TorusSampling {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::size_t bins = 512;
  /// Histogram range; [min grad - 1, max grad + 1] when empty.
  std::optional<Window> range;
};

/// Torus formula: theta sampled by a Kronecker (golden-ratio family) sequence
/// with theta_1 = 0; each sample puts Gamma/samples at
/// v = sum_jk grad_j Re(b_j conj(b_k) e^{i(theta_j - theta_k)}) / Gamma.
MomentumHistogram limiting_bohmian_measure(std::span<const cplx> weights, std::span<const double> grads,
                                           const TorusSampling& sampling = {});
MomentumHistogram limiting_bohmian_measure(const BranchSet& bs, const TorusSampling& sampling = {});

/// Atoms |b_j|^2 at p = grad_j.
std::vector<Atom> limiting_wigner_measure(std::span<const cplx> weights, std::span<const double> grads);
std::vector<Atom> limiting_wigner_measure(const BranchSet& bs);

double measure_moments(const MomentumHistogram& h, int order);
double measure_moments(std::span<const Atom> atoms, int order);

/// w(x_j, p_m) on nodes x_j (every `x_stride`-th) and p_m = pi eps m / L,
/// m = -n/2..n/2-1. Row-major: values[ix * p.size() + ip].
struct WignerTransform {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> values;
  double max_imag = 0.0;
  double max_abs = 0.0;

  double at(std::size_t ix, std::size_t ip) const { return values[ix * p.size() + ip]; }
  double dp() const { return p.size() > 1 ? p[1] - p[0] : 0.0; }
  /// int w dp at every x.
  std::vector<double> x_marginal() const;
  /// sum_x w h at every p (h = node spacing times stride).
  std::vector<double> p_marginal(double dx) const;
};

WignerTransform wigner_transform_numeric(const Field& f, double epsilon, std::size_t x_stride = 1);

}  // namespace scl
