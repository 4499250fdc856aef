#pragma once

#include <complex>
#include <span>

namespace dnls::fft {

/// Unnormalized in-place DFT, standard (0..N-1) index order:
/// X_m = sum_n x_n exp(-2 pi i n m / N).
void forward(std::span<std::complex<double>> data);

/// Unnormalized in-place inverse DFT (sign +, no 1/N factor).
void backward(std::span<std::complex<double>> data);

}  // namespace dnls::fft
