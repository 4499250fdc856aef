#include "dnls/field.hpp"

#include <cmath>

#include "dnls/errors.hpp"

namespace dnls {

ComplexField::ComplexField(Grid g, std::vector<cplx> v, double t)
    : grid(g), values(std::move(v)), time(t) {
  if (values.size() != grid.size()) throw InputError("field length does not match grid");
}

ComplexField ComplexField::zeros(const Grid& g, double t) {
  return ComplexField(g, std::vector<cplx>(g.size()), t);
}

bool ComplexField::all_finite() const noexcept {
  for (const cplx& z : values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

Spectrum::Spectrum(Grid g, std::vector<cplx> v, double t)
    : grid(g), values(std::move(v)), time(t) {
  if (values.size() != grid.size()) throw InputError("spectrum length does not match grid");
}

Spectrum Spectrum::zeros(const Grid& g, double t) {
  return Spectrum(g, std::vector<cplx>(g.size()), t);
}

FieldPair::FieldPair(ComplexField a, ComplexField b) : u1(std::move(a)), u2(std::move(b)) {
  if (!(u1.grid == u2.grid)) throw InputError("pair components live on different grids");
  if (u1.time != u2.time) throw InputError("pair components carry different times");
}

FieldPair FieldPair::zeros(const Grid& g, double t) {
  return FieldPair(ComplexField::zeros(g, t), ComplexField::zeros(g, t));
}

}  // namespace dnls
