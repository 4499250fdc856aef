#pragma once

#include <optional>

#include "dnls/field.hpp"

namespace dnls {

/// Continuum-normalized DFT: fhat(xi_k) = dx/sqrt(2 pi) sum_n exp(-i x_n xi_k) f(x_n).
/// With this weighting the discrete Plancherel identity reads
/// dx * sum |f_n|^2 == dxi * sum |fhat_k|^2.
Spectrum forward_transform(const ComplexField& field);
ComplexField inverse_transform(const Spectrum& spectrum);

/// U(dt) = exp(i dt/2 d_xx): multiplies the spectrum by exp(-i xi^2 dt / 2).
/// Negative dt applies U(-|dt|). dt == 0 returns the input unchanged; for
/// dt != 0 the Nyquist mode is zeroed.
ComplexField free_propagate(const ComplexField& field, double dt);

/// (M(t) f)(x) = exp(i x^2 / 2t) f(x). Throws DomainError at t == 0.
ComplexField apply_M(const ComplexField& field, double t);

/// (D(t) g)(x) = (it)^{-1/2} g(x/t). The input lives on the xi-nodes of its
/// grid; the output lives on grid.dilated(t), whose x-nodes are t * xi-nodes,
/// so no interpolation occurs. Throws DomainError unless t > 0.
ComplexField apply_D(const Spectrum& spectrum, double t);

/// W(t) = F M(t) F^{-1} acting on the frequency grid. apply_W(., -t) is
/// W(t)^{-1}. Throws DomainError at t == 0.
Spectrum apply_W(const Spectrum& spectrum, double t);

/// J(t) = x + i t d_x, evaluated as U(t) x U(-t). Exact multiplication by x at t == 0.
ComplexField apply_J(const ComplexField& field, double t);

/// Discrete L^2 norm sqrt(dx * sum |f|^2) with fixed-order summation.
double l2_norm(const ComplexField& field);
double l2_norm(const Spectrum& spectrum);
double linf_norm(const ComplexField& field);
double linf_norm(const Spectrum& spectrum);
/// ||<xi>^s fhat||_{L^2(dxi)}, Nyquist excluded.
double sobolev_norm(const ComplexField& field, double s);

struct NormReport {
  double l2 = 0.0;
  double linf = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double h11 = 0.0;  ///< ||<x> f||_{H^1}
  std::optional<double> j_l2;
  std::optional<double> j_h1;
};

NormReport norms(const ComplexField& field);
/// Also reports ||J f||_{L^2} and ||J f||_{H^1} for a precomputed J f.
NormReport norms(const ComplexField& field, const ComplexField& jfield);

}  // namespace dnls
