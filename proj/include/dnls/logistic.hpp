#pragma once

#include <cmath>

namespace dnls {

/// Amplitude factors for the pointwise flow
///   d/dt u1 = -|u2|^2 u1,  d/dt u2 = -|u1|^2 u2
/// over a time span `tau` >= 0, starting from squared moduli a0 = |u1|^2,
/// b0 = |u2|^2. The phases are frozen and m = a - b is conserved, so a solves
/// a' = 2 m a - 2 a^2 (and b the same law with m -> -m). With k = 2m,
///   a(tau) = a0 / (exp(-k tau) + 2 a0 (1 - exp(-k tau)) / k),
/// where (1 - exp(-k tau)) / k -> tau as k -> 0.
struct AmplitudeFactors {
  double f1 = 1.0;  ///< |u1(tau)| / |u1(0)|
  double f2 = 1.0;  ///< |u2(tau)| / |u2(0)|
};

namespace detail {

/// 1/sqrt of the Bernoulli denominator for a' = k a - 2 a^2.
inline double logistic_factor(double a0, double k, double tau) noexcept {
  if (a0 == 0.0) return 1.0;
  const double kt = k * tau;
  const double growth = k == 0.0 ? tau : -std::expm1(-kt) / k;
  const double den = std::exp(-kt) + 2.0 * a0 * growth;
  return 1.0 / std::sqrt(den);
}

}  // namespace detail

inline AmplitudeFactors logistic_factors(double a0, double b0, double tau) noexcept {
  const double k = 2.0 * (a0 - b0);
  return {detail::logistic_factor(a0, k, tau), detail::logistic_factor(b0, -k, tau)};
}

}  // namespace dnls
