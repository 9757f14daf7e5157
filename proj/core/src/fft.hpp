#pragma once

#include <complex>
#include <span>

namespace scl::detail {

// Unnormalized DFTs: forward uses exp(-2 pi i j m / n), backward exp(+...).
void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
void fft_backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace scl::detail
