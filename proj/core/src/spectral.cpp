#include "semiclassical/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "semiclassical/error.hpp"

namespace scl {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr std::size_t kVelocityBatch = 8;

using v4d = double __attribute__((vector_size(32)));

// Horner sums of the value and derivative series at kVelocityBatch points.
// out holds [Re v | Im v | Re d | Im d], each kVelocityBatch wide.
inline __attribute__((always_inline)) void horner_kernel(
    std::size_t terms, const double* vr, const double* vi, const double* dr, const double* di, const double* zr,
    const double* zi, double* out) {
  constexpr std::size_t L = kVelocityBatch / 4;
  v4d wr[L], wi[L], ar[L], ai[L], br[L], bi[L];
  for (std::size_t l = 0; l < L; ++l) {
    std::memcpy(&wr[l], zr + 4 * l, sizeof(v4d));
    std::memcpy(&wi[l], zi + 4 * l, sizeof(v4d));
    ar[l] = ai[l] = br[l] = bi[l] = v4d{0.0, 0.0, 0.0, 0.0};
  }
  for (std::size_t j = terms; j-- > 0;) {
    const double cr = vr[j], ci = vi[j], er = dr[j], ei = di[j];
    for (std::size_t l = 0; l < L; ++l) {
      // Grouped so that each output is two fused multiply-adds.
      const v4d tr = ar[l] * wr[l] + (cr - ai[l] * wi[l]);
      ai[l] = ar[l] * wi[l] + (ci + ai[l] * wr[l]);
      ar[l] = tr;
      const v4d sr = br[l] * wr[l] + (er - bi[l] * wi[l]);
      bi[l] = br[l] * wi[l] + (ei + bi[l] * wr[l]);
      br[l] = sr;
    }
  }
  constexpr std::size_t B = kVelocityBatch;
  for (std::size_t l = 0; l < L; ++l) {
    std::memcpy(out + 4 * l, &ar[l], sizeof(v4d));
    std::memcpy(out + B + 4 * l, &ai[l], sizeof(v4d));
    std::memcpy(out + 2 * B + 4 * l, &br[l], sizeof(v4d));
    std::memcpy(out + 3 * B + 4 * l, &bi[l], sizeof(v4d));
  }
}

__attribute__((target("avx2,fma"))) void horner_avx2(std::size_t terms, const double* vr, const double* vi,
                                                     const double* dr, const double* di, const double* zr,
                                                     const double* zi, double* out) {
  horner_kernel(terms, vr, vi, dr, di, zr, zi, out);
}

void horner_generic(std::size_t terms, const double* vr, const double* vi, const double* dr, const double* di,
                    const double* zr, const double* zi, double* out) {
  horner_kernel(terms, vr, vi, dr, di, zr, zi, out);
}

void horner_batch(std::size_t terms, const double* vr, const double* vi, const double* dr, const double* di,
                  const double* zr, const double* zi, double* out) {
  static const bool avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  (avx2 ? horner_avx2 : horner_generic)(terms, vr, vi, dr, di, zr, zi, out);
}

}  // namespace

Grid::Grid(double x0, double length, std::size_t n) : x0_(x0), length_(length), n_(n) {
  if (!std::isfinite(x0)) throw InvalidArgument("grid origin must be finite");
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidArgument("grid length must be positive, got " + std::to_string(length));
  if (n < 8 || !is_power_of_two(n))
    throw InvalidArgument("grid size must be a power of two >= 8, got " + std::to_string(n));
}

Grid make_grid(double x0, double length, std::size_t n) { return Grid(x0, length, n); }

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = node(j);
  return x;
}

int Grid::mode(std::size_t index) const noexcept {
  const auto half = n_ / 2;
  return index < half ? static_cast<int>(index)
                      : static_cast<int>(index) - static_cast<int>(n_);
}

std::size_t Grid::index_of_mode(int m) const noexcept {
  return m >= 0 ? static_cast<std::size_t>(m) : static_cast<std::size_t>(m + static_cast<int>(n_));
}

double Grid::wavenumber_of_mode(int m) const noexcept { return two_pi * m / length_; }

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(n_);
  const int half = static_cast<int>(n_ / 2);
  for (std::size_t i = 0; i < n_; ++i) k[i] = wavenumber_of_mode(static_cast<int>(i) - half);
  return k;
}

double Grid::wrap(double x) const noexcept {
  double u = (x - x0_) / length_;
  u -= std::floor(u);
  if (u >= 1.0) u = 0.0;
  return x0_ + u * length_;
}

Field::Field(Grid grid, std::vector<cplx> values, double time)
    : grid_(grid), values_(std::move(values)), time_(time) {
  if (values_.size() != grid_.size())
    throw InvalidArgument("field has " + std::to_string(values_.size()) + " samples, grid has " +
                          std::to_string(grid_.size()));
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (!std::isfinite(values_[j].real()) || !std::isfinite(values_[j].imag()))
      throw NumericalAbort("non-finite field sample at node " + std::to_string(j));
  }
}

Spectrum::Spectrum(Grid grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw InvalidArgument("spectrum size does not match grid");
}

Spectrum to_spectrum(const Field& f) {
  std::vector<cplx> c(f.size());
  detail::fft_forward(f.values(), c);
  const double inv_n = 1.0 / static_cast<double>(f.size());
  for (auto& v : c) v *= inv_n;
  return Spectrum(f.grid(), std::move(c));
}

Field from_spectrum(const Spectrum& s, double time) {
  std::vector<cplx> v(s.grid().size());
  detail::fft_backward(s.coeffs(), v);
  return Field(s.grid(), std::move(v), time);
}

Field spectral_derivative(const Field& f) {
  const Grid& g = f.grid();
  std::vector<cplx> c(f.size());
  detail::fft_forward(f.values(), c);
  const double inv_n = 1.0 / static_cast<double>(f.size());
  const std::size_t nyquist = g.size() / 2;
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] = j == nyquist ? cplx{} : cplx(0.0, g.wavenumber(j) * inv_n) * c[j];
  }
  std::vector<cplx> v(f.size());
  detail::fft_backward(c, v);
  return Field(g, std::move(v), f.time());
}

cplx eval_at(const Field& f, double x) { return Interpolant(f).value(x); }

double max_abs(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

bool boundary_decay(const Field& f, double tol) {
  const std::size_t n = f.size();
  const std::size_t edge = n / 16;
  double outer = 0.0;
  for (std::size_t j = 0; j < edge; ++j) {
    outer = std::max(outer, std::abs(f[j]));
    outer = std::max(outer, std::abs(f[n - 1 - j]));
  }
  return outer <= tol * max_abs(f);
}

double spectral_tail_ratio(const Field& f) {
  const Spectrum s = to_spectrum(f);
  const Grid& g = s.grid();
  const int cutoff = static_cast<int>(g.size() / 2 - g.size() / 16);
  double peak = 0.0;
  double tail = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double a = std::abs(s.coeffs()[j]);
    peak = std::max(peak, a);
    if (std::abs(g.mode(j)) >= cutoff) tail = std::max(tail, a);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

double l2_norm(const Field& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return std::sqrt(sum * f.grid().spacing());
}

// ---------------------------------------------------------------------------
// Interpolant
//
// f(x) = sum_{m=-n/2}^{n/2-1} c_m z^m with z = exp(i 2 pi (x - x0) / L).
// The Nyquist term is split as (c/2)(z^{-n/2} + z^{n/2}), so
// f(x) = z^{-n/2} sum_{j=0}^{n} d_j z^j  with d_0 = d_n = c_{-n/2}/2.
// The polynomial is evaluated by four interleaved Horner chains in z^4.

Interpolant::Interpolant(const Field& f) : Interpolant(to_spectrum(f)) {}

Interpolant::Interpolant(const Spectrum& s) : grid_(s.grid()) {
  const std::size_t n = grid_.size();
  const int half = static_cast<int>(n / 2);
  // Ascending powers z^j, j = 0..n, of z = exp(2 pi i (x - x0) / L); term j is mode j - n/2.
  std::vector<cplx> val(n + 1), der(n + 1);
  for (std::size_t j = 1; j < n; ++j) {
    const int m = static_cast<int>(j) - half;
    const cplx c = s.coefficient(m);
    val[j] = c;
    der[j] = cplx(0.0, grid_.wavenumber_of_mode(m)) * c;
  }
  val[0] = val[n] = 0.5 * s.coefficient(-half);

  // Drop leading and trailing terms below the rounding level of the transform.
  double peak = 0.0;
  for (const cplx& c : val) peak = std::max(peak, std::norm(c));
  const double tol = kTrimTolerance * kTrimTolerance * peak;
  std::size_t lo = 0, hi = n;
  if (peak > 0.0) {
    while (lo < hi && std::norm(val[lo]) <= tol) ++lo;
    while (hi > lo && std::norm(val[hi]) <= tol) --hi;
  }
  offset_ = lo;
  const std::size_t terms = hi - lo + 1;
  blocks_ = (terms + 3) / 4;
  const std::size_t padded = blocks_ * 4;
  val_re_.assign(padded, 0.0);
  val_im_.assign(padded, 0.0);
  der_re_.assign(padded, 0.0);
  der_im_.assign(padded, 0.0);
  for (std::size_t i = 0; i < terms; ++i) {
    val_re_[i] = val[lo + i].real();
    val_im_[i] = val[lo + i].imag();
    der_re_[i] = der[lo + i].real();
    der_im_[i] = der[lo + i].imag();
  }
}

Interpolant::Sums Interpolant::sums(double x, bool with_derivative) const {
  double u = (x - grid_.x0()) / grid_.length();
  u -= std::floor(u);
  const double theta = two_pi * u;
  const double zr = std::cos(theta);
  const double zi = std::sin(theta);
  const double wr = std::cos(4.0 * theta);
  const double wi = std::sin(4.0 * theta);

  double ar[4] = {0, 0, 0, 0}, ai[4] = {0, 0, 0, 0};
  double br[4] = {0, 0, 0, 0}, bi[4] = {0, 0, 0, 0};
  const double* vr = val_re_.data();
  const double* vi = val_im_.data();
  const double* dr = der_re_.data();
  const double* di = der_im_.data();

  if (with_derivative) {
    for (std::size_t q = blocks_; q-- > 0;) {
      const std::size_t base = 4 * q;
      for (int r = 0; r < 4; ++r) {
        const double tr = ar[r] * wr - ai[r] * wi + vr[base + r];
        const double ti = ar[r] * wi + ai[r] * wr + vi[base + r];
        ar[r] = tr;
        ai[r] = ti;
        const double sr = br[r] * wr - bi[r] * wi + dr[base + r];
        const double si = br[r] * wi + bi[r] * wr + di[base + r];
        br[r] = sr;
        bi[r] = si;
      }
    }
  } else {
    for (std::size_t q = blocks_; q-- > 0;) {
      const std::size_t base = 4 * q;
      for (int r = 0; r < 4; ++r) {
        const double tr = ar[r] * wr - ai[r] * wi + vr[base + r];
        const double ti = ar[r] * wi + ai[r] * wr + vi[base + r];
        ar[r] = tr;
        ai[r] = ti;
      }
    }
  }

  // Combine the chains: S = sum_r z^r A_r, evaluated by Horner in z.
  Sums out{0, 0, 0, 0};
  for (int r = 3; r >= 0; --r) {
    const double tr = out.vr * zr - out.vi * zi + ar[r];
    const double ti = out.vr * zi + out.vi * zr + ai[r];
    out.vr = tr;
    out.vi = ti;
    const double sr = out.dr * zr - out.di * zi + br[r];
    const double si = out.dr * zi + out.di * zr + bi[r];
    out.dr = sr;
    out.di = si;
  }
  return out;
}

cplx Interpolant::shift(double x) const {
  // z^{offset - n/2} with the angle reduced before the trigonometric call.
  double u = (x - grid_.x0()) / grid_.length();
  u -= std::floor(u);
  const double power = static_cast<double>(offset_) - static_cast<double>(grid_.size() / 2);
  double turns = u * power;
  turns -= std::floor(turns);
  return std::polar(1.0, two_pi * turns);
}

cplx Interpolant::value(double x) const {
  const Sums s = sums(x, false);
  return shift(x) * cplx(s.vr, s.vi);
}

Interpolant::Sample Interpolant::value_and_derivative(double x) const {
  const Sums s = sums(x, true);
  const cplx z = shift(x);
  return {z * cplx(s.vr, s.vi), z * cplx(s.dr, s.di)};
}

double Interpolant::velocity(double x, double epsilon, double rho_floor) const {
  // The common factor z^{-n/2} cancels in psi' conj(psi).
  const Sums s = sums(x, true);
  const double rho = s.vr * s.vr + s.vi * s.vi;
  const double im = s.di * s.vr - s.dr * s.vi;
  return epsilon * im / (rho + rho_floor);
}

void Interpolant::velocities(std::span<const double> xs, double epsilon, double rho_floor,
                             std::span<double> out) const {
  if (out.size() != xs.size()) throw InvalidArgument("velocity output size does not match the points");
  constexpr std::size_t B = kVelocityBatch;
  for (std::size_t start = 0; start < xs.size(); start += B) {
    const std::size_t count = std::min(B, xs.size() - start);
    double zr[B], zi[B], s[4 * B];
    for (std::size_t p = 0; p < B; ++p) {
      double u = p < count ? (xs[start + p] - grid_.x0()) / grid_.length() : 0.0;
      u -= std::floor(u);
      zr[p] = std::cos(two_pi * u);
      zi[p] = std::sin(two_pi * u);
    }
    horner_batch(4 * blocks_, val_re_.data(), val_im_.data(), der_re_.data(), der_im_.data(), zr, zi, s);
    for (std::size_t p = 0; p < count; ++p) {
      const double vr = s[p], vi = s[B + p], dr = s[2 * B + p], di = s[3 * B + p];
      out[start + p] = epsilon * (di * vr - dr * vi) / (vr * vr + vi * vi + rho_floor);
    }
  }
}

}  // namespace scl
