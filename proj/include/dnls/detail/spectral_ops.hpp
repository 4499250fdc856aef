#pragma once

// Internal helpers shared by the time steppers and analysis code. They work
// in raw FFT order (index m <-> k = m for m < N/2, m - N otherwise) and skip
// the continuum normalization, which cancels in every round trip.

#include <span>
#include <vector>

#include "dnls/field.hpp"

namespace dnls::detail {

/// Angular frequency of FFT-order index m; zero at the Nyquist index.
double fft_wavenumber(const Grid& g, std::size_t m) noexcept;

/// exp(-i xi_m^2 dt / 2) in FFT order with the Nyquist entry zeroed.
std::vector<cplx> free_phases(const Grid& g, double dt);

/// In place: data <- IFFT(phases * FFT(data)) / N.
void apply_multiplier(std::span<cplx> data, std::span<const cplx> phases);

/// Convert between ascending-order continuum spectra and FFT-order raw DFT.
void raw_to_spectrum(const Grid& g, std::span<const cplx> raw, std::span<cplx> out);
void spectrum_to_raw(const Grid& g, std::span<const cplx> spec, std::span<cplx> out);

double sum_abs2(std::span<const cplx> v);

}  // namespace dnls::detail
