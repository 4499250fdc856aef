#pragma once

#include <complex>
#include <vector>

#include "dnls/grid.hpp"

namespace dnls {

using cplx = std::complex<double>;

/// Samples of a function of x on `grid` at time `time`.
struct ComplexField {
  Grid grid;
  std::vector<cplx> values;
  double time = 0.0;

  ComplexField() = default;
  ComplexField(Grid g, std::vector<cplx> v, double t = 0.0);
  static ComplexField zeros(const Grid& g, double t = 0.0);

  bool all_finite() const noexcept;
};

/// Samples of a function of xi on the ascending frequency nodes of `grid`.
struct Spectrum {
  Grid grid;
  std::vector<cplx> values;
  double time = 0.0;

  Spectrum() = default;
  Spectrum(Grid g, std::vector<cplx> v, double t = 0.0);
  static Spectrum zeros(const Grid& g, double t = 0.0);
};

/// The two components (u1, u2) of the system at one instant.
struct FieldPair {
  ComplexField u1;
  ComplexField u2;

  FieldPair() = default;
  /// Throws InputError if grids or times disagree.
  FieldPair(ComplexField a, ComplexField b);
  static FieldPair zeros(const Grid& g, double t = 0.0);

  const Grid& grid() const noexcept { return u1.grid; }
  double time() const noexcept { return u1.time; }
  void set_time(double t) noexcept { u1.time = t; u2.time = t; }
};

}  // namespace dnls
