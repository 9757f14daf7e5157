#include "semiclassical/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "semiclassical/error.hpp"

namespace scl {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_branch_data(std::span<const cplx> weights, std::span<const double> grads) {
  if (weights.size() != grads.size()) throw InvalidArgument("branch weights and gradients differ in length");
  if (weights.empty()) throw InvalidArgument("measure needs at least one branch");
  for (std::size_t j = 0; j < grads.size(); ++j)
    for (std::size_t k = j + 1; k < grads.size(); ++k)
      if (std::abs(grads[j] - grads[k]) <= 1e-12 * std::max(1.0, std::abs(grads[j])))
        throw InvalidArgument("branch gradients must be pairwise distinct");
}

// Generalised golden ratio: the positive root of x^{d+1} = x + 1.
double plastic_root(std::size_t d) {
  double x = 2.0;
  for (int it = 0; it < 200; ++it) x = std::pow(1.0 + x, 1.0 / static_cast<double>(d + 1));
  return x;
}

}  // namespace

MomentumHistogram MomentumHistogram::uniform(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw InvalidArgument("histogram needs a positive bin count and range");
  MomentumHistogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  h.masses.assign(bins, 0.0);
  h.first_moments.assign(bins, 0.0);
  h.second_moments.assign(bins, 0.0);
  return h;
}

void MomentumHistogram::add(double p, double w) {
  const double lo = bin_edges.front();
  const double hi = bin_edges.back();
  const auto nb = static_cast<double>(bins());
  double pos = std::floor((p - lo) / (hi - lo) * nb);
  pos = std::clamp(pos, 0.0, nb - 1.0);
  const auto i = static_cast<std::size_t>(pos);
  masses[i] += w;
  first_moments[i] += w * p;
  second_moments[i] += w * p * p;
  total_mass += w;
}

std::optional<double> MomentumHistogram::concentration(double fraction, std::size_t max_bins) const {
  if (total_mass <= 0.0) return std::nullopt;
  double best = -1.0;
  std::size_t best_i = 0;
  const std::size_t width = std::max<std::size_t>(1, std::min(max_bins, bins()));
  for (std::size_t i = 0; i + width <= bins(); ++i) {
    double m = 0.0;
    for (std::size_t k = i; k < i + width; ++k) m += masses[k];
    if (m > best) {
      best = m;
      best_i = i;
    }
  }
  if (best < fraction * total_mass) return std::nullopt;
  double m1 = 0.0;
  for (std::size_t k = best_i; k < best_i + width; ++k) m1 += first_moments[k];
  return m1 / best;
}

MomentumHistogram limiting_bohmian_measure(std::span<const cplx> weights, std::span<const double> grads,
                                           const TorusSampling& sampling) {
  check_branch_data(weights, grads);
  if (sampling.samples == 0) throw InvalidArgument("torus sampling needs at least one sample");
  const auto [gmin, gmax] = std::minmax_element(grads.begin(), grads.end());
  const Window range = sampling.range.value_or(Window{*gmin - 1.0, *gmax + 1.0});
  MomentumHistogram h = MomentumHistogram::uniform(range.lo, range.hi, sampling.bins);

  const std::size_t n = weights.size();
  const std::size_t dims = n - 1;
  std::vector<double> alpha(dims), offset(dims);
  if (dims > 0) {
    const double phi = plastic_root(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      alpha[j] = std::fmod(1.0 / std::pow(phi, static_cast<double>(j + 1)), 1.0);
      const double s = 0.5 + static_cast<double>(sampling.seed) * alpha[j];
      offset[j] = s - std::floor(s);
    }
  }

  double abs_sum = 0.0;
  for (const cplx& b : weights) abs_sum += std::abs(b);
  const double gamma_floor = 1e-12 * abs_sum * abs_sum;
  const double inv_samples = 1.0 / static_cast<double>(sampling.samples);

  std::vector<cplx> rotated(n);
  for (std::size_t s = 0; s < sampling.samples; ++s) {
    rotated[0] = weights[0];
    for (std::size_t j = 1; j < n; ++j) {
      double u = offset[j - 1] + static_cast<double>(s + 1) * alpha[j - 1];
      u -= std::floor(u);
      rotated[j] = weights[j] * std::polar(1.0, two_pi * u);
    }
    cplx total{};
    for (const cplx& r : rotated) total += r;
    const double gamma = std::norm(total);
    if (gamma < gamma_floor) continue;
    double numer = 0.0;
    for (std::size_t j = 0; j < n; ++j) numer += grads[j] * (rotated[j] * std::conj(total)).real();
    h.add(numer / gamma, gamma * inv_samples);
  }
  return h;
}

MomentumHistogram limiting_bohmian_measure(const BranchSet& bs, const TorusSampling& sampling) {
  const std::vector<cplx> b = branch_weights(bs);
  std::vector<double> g;
  for (const Branch& br : bs.branches) g.push_back(br.grad);
  return limiting_bohmian_measure(b, g, sampling);
}

std::vector<Atom> limiting_wigner_measure(std::span<const cplx> weights, std::span<const double> grads) {
  check_branch_data(weights, grads);
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < weights.size(); ++j) atoms.push_back({grads[j], std::norm(weights[j])});
  return atoms;
}

std::vector<Atom> limiting_wigner_measure(const BranchSet& bs) {
  const std::vector<cplx> b = branch_weights(bs);
  std::vector<double> g;
  for (const Branch& br : bs.branches) g.push_back(br.grad);
  return limiting_wigner_measure(b, g);
}

double measure_moments(const MomentumHistogram& h, int order) {
  const std::vector<double>* src = nullptr;
  switch (order) {
    case 0:
      src = &h.masses;
      break;
    case 1:
      src = &h.first_moments;
      break;
    case 2:
      src = &h.second_moments;
      break;
    default:
      throw InvalidArgument("moment order must be 0, 1 or 2");
  }
  double sum = 0.0;
  for (double v : *src) sum += v;
  return sum;
}

double measure_moments(std::span<const Atom> atoms, int order) {
  if (order < 0 || order > 2) throw InvalidArgument("moment order must be 0, 1 or 2");
  double sum = 0.0;
  for (const Atom& a : atoms) sum += a.mass * std::pow(a.p, order);
  return sum;
}

// ---------------------------------------------------------------------------
// Numerical Wigner transform

std::vector<double> WignerTransform::x_marginal() const {
  std::vector<double> out(x.size(), 0.0);
  const double d = dp();
  for (std::size_t ix = 0; ix < x.size(); ++ix) {
    double s = 0.0;
    for (std::size_t ip = 0; ip < p.size(); ++ip) s += at(ix, ip);
    out[ix] = s * d;
  }
  return out;
}

std::vector<double> WignerTransform::p_marginal(double dx) const {
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t ix = 0; ix < x.size(); ++ix)
    for (std::size_t ip = 0; ip < p.size(); ++ip) out[ip] += at(ix, ip) * dx;
  return out;
}

WignerTransform wigner_transform_numeric(const Field& f, double epsilon, std::size_t x_stride) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (x_stride == 0) throw InvalidArgument("x stride must be >= 1");
  const Grid& g = f.grid();
  const std::size_t n = g.size();
  const double h = g.spacing();
  // eta_l = 2 l h / eps puts the half-shifts eps eta / 2 on node offsets.
  const double d_eta = 2.0 * h / epsilon;
  const double scale = d_eta / two_pi;

  WignerTransform w;
  w.p.resize(n);
  for (std::size_t m = 0; m < n; ++m)
    w.p[m] = std::numbers::pi * epsilon * (static_cast<double>(m) - static_cast<double>(n / 2)) / g.length();
  for (std::size_t j = 0; j < n; j += x_stride) w.x.push_back(g.node(j));
  w.values.resize(w.x.size() * n);

  std::vector<cplx> corr(n), spec(n);
  const auto ni = static_cast<long>(n);
  for (std::size_t row = 0; row < w.x.size(); ++row) {
    const long j = static_cast<long>(row * x_stride);
    for (long l = -ni / 2 + 1; l < ni / 2; ++l) {
      const cplx left = f[static_cast<std::size_t>(((j - l) % ni + ni) % ni)];
      const cplx right = f[static_cast<std::size_t>(((j + l) % ni + ni) % ni)];
      corr[static_cast<std::size_t>((l + ni) % ni)] = left * std::conj(right);
    }
    corr[n / 2] = 0.0;  // unpaired lag -n/2
    detail::fft_backward(corr, spec);
    for (std::size_t m = 0; m < n; ++m) {
      // Ascending p: mode index m - n/2.
      const std::size_t k = (m + n / 2) % n;
      const cplx v = scale * spec[k];
      w.values[row * n + m] = v.real();
      w.max_imag = std::max(w.max_imag, std::abs(v.imag()));
      w.max_abs = std::max(w.max_abs, std::abs(v.real()));
    }
  }
  return w;
}

}  // namespace scl
