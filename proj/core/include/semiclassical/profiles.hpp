#pragma once

// Closed-form and tabulated descriptors for WKB initial data a0(x) e^{i S0(x)/eps}.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace scl {

/// Initial phase S0 with its first two derivatives.
class PhaseProfile {
 public:
  struct Zero {};
  struct Plane {
    double k;
    double origin;
  };
  /// S0 = s x^2
  struct Quadratic {
    double s;
  };
  /// S0 = -(1/alpha) ln cosh(alpha x - beta)
  struct LogCosh {
    double alpha;
    double beta;
  };
  struct Table;

  static PhaseProfile zero();
  static PhaseProfile plane(double k, double origin = 0.0);
  static PhaseProfile quadratic(double s);
  static PhaseProfile logcosh(double alpha, double beta);
  /// Uniform samples S0(x0 + i h); interpolated by a cubic B-spline.
  static PhaseProfile table(double x0, double h, std::vector<double> samples);

  double value(double x) const;
  double slope(double x) const;
  double curvature(double x) const;

  /// sup |S0'| when it is finite (zero, plane, logcosh).
  std::optional<double> slope_bound() const;
  /// Interval where the descriptor is defined; nullopt means the whole line.
  std::optional<std::pair<double, double>> domain() const;

  bool is_table() const;
  std::string describe() const;

 private:
  using Variant = std::variant<Zero, Plane, Quadratic, LogCosh, std::shared_ptr<const Table>>;
  explicit PhaseProfile(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Initial amplitude a0 (real valued).
class AmplitudeProfile {
 public:
  /// P(x - center) exp(-c (x - center)^2), P given by ascending coefficients.
  struct PolyGaussian {
    double center;
    double c;
    std::vector<double> coeffs;
  };
  struct Table;

  static AmplitudeProfile gaussian(double center, double c);
  static AmplitudeProfile polynomial_gaussian(double center, double c, std::vector<double> coeffs);
  /// Uniform samples a0(x0 + i h); zero outside the table.
  static AmplitudeProfile table(double x0, double h, std::vector<double> samples);

  double value(double x) const;
  double derivative(double x) const;

  /// max |a0| (located by a dense scan for polynomial profiles).
  double peak() const;
  /// Smallest interval outside of which |a0| < rel_threshold * peak().
  std::pair<double, double> support(double rel_threshold) const;

  /// Exact form of a0 when it is a pure Gaussian.
  std::optional<PolyGaussian> as_poly_gaussian() const;

  std::string describe() const;

 private:
  using Variant = std::variant<PolyGaussian, std::shared_ptr<const Table>>;
  explicit AmplitudeProfile(Variant v) : v_(std::move(v)) {}
  std::pair<double, double> scan_window() const;
  Variant v_;
};

/// Semiclassical wave packet eps^{-1/4} a0((x - center)/sqrt(eps)) e^{i k (x - center)/eps}.
struct Wavepacket {
  double center;
  double momentum;
};

struct WkbInitialData {
  AmplitudeProfile amplitude;
  PhaseProfile phase;
  std::optional<Wavepacket> wavepacket;

  /// Amplitude in physical variables; for wave packets this is the rescaled
  /// profile (requires a polynomial-Gaussian a0).
  AmplitudeProfile effective_amplitude(double epsilon) const;
  PhaseProfile effective_phase() const;
};

}  // namespace scl
