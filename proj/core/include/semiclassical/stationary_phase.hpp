#pragma once

// Free-space (V = 0) multi-phase WKB: stationary points of
// Phi(t, x, y) = S0(y) + (x - y)^2 / (2t), their branches with Maslov
// corrections, and a direct quadrature of the exact oscillatory integral.

#include <optional>
#include <vector>

#include "semiclassical/classical_flow.hpp"
#include "semiclassical/profiles.hpp"
#include "semiclassical/spectral.hpp"

namespace scl {

struct StationaryPointOptions {
  std::size_t scan_samples = 4096;
  /// Scan interval for y; derived from the phase when empty.
  std::optional<Window> window;
};

/// All roots of g(y) = y + t S0'(y) - x, ascending. Throws CausticError when
/// a root is degenerate (|g'| < 1e-8).
std::vector<double> stationary_points(double t, double x, const PhaseProfile& phase,
                                      const StationaryPointOptions& opts = {});

struct Branch {
  double y;
  /// S_j = S0(y) + (t/2) S0'(y)^2
  double phase;
  /// a0(y) / sqrt|1 + t S0''(y)|
  cplx amplitude;
  /// 1 when 1 + t S0''(y) < 0.
  int m_minus;
  /// grad S_j = S0'(y)
  double grad;
};

struct BranchSet {
  double t;
  double x;
  std::vector<Branch> branches;

  std::size_t size() const noexcept { return branches.size(); }
};

BranchSet branch_set(double t, double x, const AmplitudeProfile& a0, const PhaseProfile& phase,
                     const StationaryPointOptions& opts = {});

/// e^{-i pi m_minus / 2}: the prefactor (2 pi i eps t)^{-1/2} folded with the
/// stationary-phase factor e^{i pi sgn(Phi'')/4}.
cplx maslov_factor(int m_minus);

/// b_j = a_j e^{-i pi m_j / 2}
std::vector<cplx> branch_weights(const BranchSet& bs);

/// sum_j a_j e^{-i pi m_j/2} e^{i S_j / eps}
cplx multiphase_eval(const BranchSet& bs, double epsilon);

struct OracleOptions {
  double points_per_period = 40.0;
  std::size_t max_points = 20'000'000;
  /// Amplitude cut-off defining the integration interval.
  double support_threshold = 1e-17;
};

/// (2 pi i eps t)^{-1/2} int a0(y) e^{i Phi(t,x,y)/eps} dy by the composite
/// trapezoid rule. Throws UnderResolved if fewer than 10 points per local
/// phase period are affordable.
cplx oscillatory_integral_oracle(double t, double x, double epsilon, const AmplitudeProfile& a0,
                                 const PhaseProfile& phase, const OracleOptions& opts = {});

}  // namespace scl
