#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace scl::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// Planning is not thread-safe in FFTW; execution of an existing plan on new
// arrays is.
const PlanPair& plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Plans are made on SIMD-aligned arrays; execute() copies misaligned data.
  fftw_complex* pa = fftw_alloc_complex(n);
  fftw_complex* pb = fftw_alloc_complex(n);
  PlanPair p;
  p.forward = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_1d(static_cast<int>(n), pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(pa);
  fftw_free(pb);
  return cache.emplace(n, p).first->second;
}

struct AlignedBuffer {
  fftw_complex* data = nullptr;
  std::size_t size = 0;

  ~AlignedBuffer() { fftw_free(data); }
  fftw_complex* get(std::size_t n) {
    if (size < n) {
      fftw_free(data);
      data = fftw_alloc_complex(n);
      size = n;
    }
    return data;
  }
};

bool aligned(const void* p) { return fftw_alignment_of(static_cast<double*>(const_cast<void*>(p))) == 0; }

void execute(fftw_plan plan, std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) {
  thread_local AlignedBuffer in_buf, out_buf;
  const std::size_t n = in.size();
  const bool direct_in = aligned(in.data()) && in.data() != out.data();
  const bool direct_out = aligned(out.data());
  fftw_complex* pin = nullptr;
  if (direct_in) {
    // FFTW_ESTIMATE plans never write to the input of an out-of-place c2c transform.
    pin = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  } else {
    pin = in_buf.get(n);
    std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(pin));
  }
  fftw_complex* pout = direct_out ? reinterpret_cast<fftw_complex*>(out.data()) : out_buf.get(n);
  fftw_execute_dft(plan, pin, pout);
  if (!direct_out) {
    const auto* res = reinterpret_cast<const std::complex<double>*>(pout);
    std::copy(res, res + n, out.begin());
  }
}

}  // namespace

void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  execute(plans_for(in.size()).forward, in, out);
}

void fft_backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  execute(plans_for(in.size()).backward, in, out);
}

}  // namespace scl::detail
