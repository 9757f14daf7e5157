#pragma once

// Periodic spectral representation on a uniform grid: transforms, spectral
// differentiation and evaluation of the truncated Fourier series off the grid.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace scl {

using cplx = std::complex<double>;

/// Uniform periodic grid x_j = x0 + j L / n, j = 0..n-1, with n a power of two >= 8.
class Grid {
 public:
  Grid(double x0, double length, std::size_t n);

  double x0() const noexcept { return x0_; }
  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_); }

  double node(std::size_t j) const noexcept { return x0_ + static_cast<double>(j) * spacing(); }
  std::vector<double> nodes() const;

  /// Mode number m in [-n/2, n/2) stored at FFT-order index `index`.
  int mode(std::size_t index) const noexcept;
  /// FFT-order index of mode m.
  std::size_t index_of_mode(int m) const noexcept;
  double wavenumber_of_mode(int m) const noexcept;
  /// k at FFT-order index.
  double wavenumber(std::size_t index) const noexcept { return wavenumber_of_mode(mode(index)); }
  /// Wavenumbers in ascending mode order m = -n/2 .. n/2-1.
  std::vector<double> wavenumbers() const;

  /// Maps x periodically into [x0, x0 + L).
  double wrap(double x) const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  double x0_;
  double length_;
  std::size_t n_;
};

Grid make_grid(double x0, double length, std::size_t n);

/// Complex samples of a wavefunction on a grid at a fixed time.
class Field {
 public:
  Field(Grid grid, std::vector<cplx> values, double time = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  const cplx& operator[](std::size_t j) const noexcept { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }
  double time() const noexcept { return time_; }

  Field with_time(double t) const { return Field(grid_, values_, t); }

 private:
  Grid grid_;
  std::vector<cplx> values_;
  double time_;
};

/// Fourier coefficients c_m such that f(x) = sum_m c_m exp(i k_m (x - x0)).
/// Stored in FFT order (index j holds mode grid.mode(j)).
class Spectrum {
 public:
  Spectrum(Grid grid, std::vector<cplx> coeffs);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  cplx coefficient(int m) const noexcept { return coeffs_[grid_.index_of_mode(m)]; }

 private:
  Grid grid_;
  std::vector<cplx> coeffs_;
};

Spectrum to_spectrum(const Field& f);
Field from_spectrum(const Spectrum& s, double time);

/// Multiplies every coefficient by i k_m; the unpaired Nyquist mode -n/2 is zeroed.
Field spectral_derivative(const Field& f);

/// Truncated Fourier series at an arbitrary point (periodic wrap applied).
cplx eval_at(const Field& f, double x);

/// True iff max |f| over the outer n/16 nodes on each side is <= tol * max |f|.
bool boundary_decay(const Field& f, double tol);

/// max |c_m| over the outer n/16 modes on each side of the spectrum, divided by max |c_m|.
/// A resolved field has this below 1e-12.
double spectral_tail_ratio(const Field& f);

/// Grid-weighted discrete L2 norm sqrt(h sum |f_j|^2).
double l2_norm(const Field& f);
double max_abs(const Field& f);

/// Evaluates the truncated Fourier series of a field (and of its spectral
/// derivative) at many off-grid points. Construction costs one FFT; each
/// evaluation is a direct O(n) summation.
class Interpolant {
 public:
  explicit Interpolant(const Field& f);
  explicit Interpolant(const Spectrum& s);

  struct Sample {
    cplx value;
    cplx derivative;
  };

  cplx value(double x) const;
  Sample value_and_derivative(double x) const;

  /// eps * Im(psi' conj(psi)) / (|psi|^2 + rho_floor), evaluated at x.
  double velocity(double x, double epsilon, double rho_floor) const;
  /// velocity() at many points; out[i] belongs to xs[i].
  void velocities(std::span<const double> xs, double epsilon, double rho_floor, std::span<double> out) const;

  const Grid& grid() const noexcept { return grid_; }

 private:
  struct Sums {
    double vr, vi, dr, di;
  };
  Sums sums(double x, bool with_derivative) const;
  cplx shift(double x) const;

  /// Terms with |c| <= kTrimTolerance * max |c| at either end of the spectrum are dropped.
  static constexpr double kTrimTolerance = 1e-17;

  Grid grid_;
  std::size_t blocks_ = 0;
  /// Power of z carried by the first stored term.
  std::size_t offset_ = 0;
  // Polyphase layout: block q holds coefficients of z^{offset + 4q + r}, r = 0..3.
  std::vector<double> val_re_, val_im_, der_re_, der_im_;
};

}  // namespace scl
