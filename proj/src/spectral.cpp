#include "dnls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dnls/detail/spectral_ops.hpp"
#include "dnls/errors.hpp"
#include "dnls/fft.hpp"
#include "dnls/reduce.hpp"

namespace dnls {
namespace detail {

double fft_wavenumber(const Grid& g, std::size_t m) noexcept {
  const std::size_t n = g.size();
  if (m == n / 2) return 0.0;
  const double k = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
  return k * g.dxi();
}

std::vector<cplx> free_phases(const Grid& g, double dt) {
  const std::size_t n = g.size();
  std::vector<cplx> out(n);
  const double dxi = g.dxi();
  for (std::size_t m = 0; m < n; ++m) {
    if (m == n / 2) {
      out[m] = 0.0;
      continue;
    }
    const double k = m < n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
    // k^2 is exact in double, so the phase error is only that of dxi^2*dt/2.
    const double angle = 0.5 * dxi * dxi * dt * (k * k);
    out[m] = std::polar(1.0, -angle);
  }
  return out;
}

void apply_multiplier(std::span<cplx> data, std::span<const cplx> phases) {
  fft::forward(data);
  const double inv_n = 1.0 / static_cast<double>(data.size());
  for (std::size_t m = 0; m < data.size(); ++m) data[m] *= phases[m] * inv_n;
  fft::backward(data);
}

void raw_to_spectrum(const Grid& g, std::span<const cplx> raw, std::span<cplx> out) {
  const std::size_t n = g.size();
  const double c = g.dx() / std::sqrt(2.0 * std::numbers::pi);
  // N/2 is even for N >= 8, so (-1)^k == (-1)^j with k = j - N/2.
  for (std::size_t j = 0; j < n; ++j) {
    const double sign = (j & 1u) ? -c : c;
    out[j] = sign * raw[(j + n / 2) % n];
  }
}

void spectrum_to_raw(const Grid& g, std::span<const cplx> spec, std::span<cplx> out) {
  const std::size_t n = g.size();
  const double c = std::sqrt(2.0 * std::numbers::pi) / g.dx();
  for (std::size_t j = 0; j < n; ++j) {
    const double sign = (j & 1u) ? -c : c;
    out[(j + n / 2) % n] = sign * spec[j];
  }
}

double sum_abs2(std::span<const cplx> v) {
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = std::norm(v[i]);
  return pairwise_sum(sq);
}

}  // namespace detail

Spectrum forward_transform(const ComplexField& field) {
  std::vector<cplx> buf = field.values;
  fft::forward(buf);
  Spectrum out = Spectrum::zeros(field.grid, field.time);
  detail::raw_to_spectrum(field.grid, buf, out.values);
  return out;
}

ComplexField inverse_transform(const Spectrum& spectrum) {
  const Grid& g = spectrum.grid;
  std::vector<cplx> buf(g.size());
  detail::spectrum_to_raw(g, spectrum.values, buf);
  fft::backward(buf);
  const double inv_n = 1.0 / static_cast<double>(g.size());
  for (cplx& z : buf) z *= inv_n;
  return ComplexField(g, std::move(buf), spectrum.time);
}

ComplexField free_propagate(const ComplexField& field, double dt) {
  if (dt == 0.0) return field;
  ComplexField out = field;
  const auto phases = detail::free_phases(field.grid, dt);
  detail::apply_multiplier(out.values, phases);
  out.time = field.time + dt;
  return out;
}

ComplexField apply_M(const ComplexField& field, double t) {
  if (t == 0.0) throw DomainError("M(t) is undefined at t = 0");
  ComplexField out = field;
  for (std::size_t n = 0; n < out.values.size(); ++n) {
    const double x = field.grid.x(n);
    out.values[n] *= std::polar(1.0, x * x / (2.0 * t));
  }
  return out;
}

ComplexField apply_D(const Spectrum& spectrum, double t) {
  if (!(t > 0.0)) throw DomainError("D(t) requires t > 0");
  const Grid target = spectrum.grid.dilated(t);
  // (it)^{-1/2} = t^{-1/2} exp(-i pi/4)
  const cplx factor = std::polar(1.0 / std::sqrt(t), -0.25 * std::numbers::pi);
  std::vector<cplx> v(spectrum.values.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = factor * spectrum.values[j];
  return ComplexField(target, std::move(v), spectrum.time);
}

Spectrum apply_W(const Spectrum& spectrum, double t) {
  if (t == 0.0) throw DomainError("W(t) is undefined at t = 0");
  return forward_transform(apply_M(inverse_transform(spectrum), t));
}

ComplexField apply_J(const ComplexField& field, double t) {
  if (t == 0.0) {
    ComplexField out = field;
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] *= field.grid.x(n);
    return out;
  }
  ComplexField pulled = free_propagate(field, -t);
  for (std::size_t n = 0; n < pulled.values.size(); ++n) pulled.values[n] *= field.grid.x(n);
  ComplexField out = free_propagate(pulled, t);
  out.time = field.time;
  return out;
}

double l2_norm(const ComplexField& field) {
  return std::sqrt(field.grid.dx() * detail::sum_abs2(field.values));
}

double l2_norm(const Spectrum& spectrum) {
  return std::sqrt(spectrum.grid.dxi() * detail::sum_abs2(spectrum.values));
}

double linf_norm(const ComplexField& field) {
  double m = 0.0;
  for (const cplx& z : field.values) m = std::max(m, std::abs(z));
  return m;
}

double linf_norm(const Spectrum& spectrum) {
  double m = 0.0;
  for (const cplx& z : spectrum.values) m = std::max(m, std::abs(z));
  return m;
}

namespace {

double weighted_spectral_norm(const Spectrum& fhat, double s) {
  const Grid& g = fhat.grid;
  std::vector<double> w(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j == 0) {  // Nyquist (k = -N/2) is unpaired
      w[j] = 0.0;
      continue;
    }
    const double xi = g.xi(j);
    w[j] = std::pow(1.0 + xi * xi, s) * std::norm(fhat.values[j]);
  }
  return std::sqrt(g.dxi() * pairwise_sum(w));
}

ComplexField japanese_weighted(const ComplexField& f) {
  ComplexField out = f;
  for (std::size_t n = 0; n < out.values.size(); ++n) {
    const double x = f.grid.x(n);
    out.values[n] *= std::sqrt(1.0 + x * x);
  }
  return out;
}

}  // namespace

double sobolev_norm(const ComplexField& field, double s) {
  return weighted_spectral_norm(forward_transform(field), s);
}

NormReport norms(const ComplexField& field) {
  NormReport r;
  const Spectrum fhat = forward_transform(field);
  r.l2 = l2_norm(field);
  r.linf = linf_norm(field);
  r.h1 = weighted_spectral_norm(fhat, 1.0);
  r.h2 = weighted_spectral_norm(fhat, 2.0);
  r.h11 = sobolev_norm(japanese_weighted(field), 1.0);
  return r;
}

NormReport norms(const ComplexField& field, const ComplexField& jfield) {
  NormReport r = norms(field);
  r.j_l2 = l2_norm(jfield);
  r.j_h1 = sobolev_norm(jfield, 1.0);
  return r;
}

}  // namespace dnls
