#include "dnls/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "dnls/errors.hpp"

namespace dnls {

double Grid::dxi() const noexcept { return 2.0 * std::numbers::pi / length_; }

double Grid::xi_nyquist() const noexcept { return 0.5 * static_cast<double>(n_) * dxi(); }

std::vector<double> Grid::x_nodes() const {
  std::vector<double> out(n_);
  for (std::size_t n = 0; n < n_; ++n) out[n] = x(n);
  return out;
}

std::vector<double> Grid::xi_nodes() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = xi(j);
  return out;
}

Grid Grid::dilated(double t) const {
  if (!(t > 0.0)) throw DomainError("dilation requires t > 0");
  return make_grid(n_, t * static_cast<double>(n_) * dxi());
}

Grid make_grid(std::size_t n_points, double length) {
  if (n_points < 8 || !std::has_single_bit(n_points))
    throw ConfigError("n_points must be a power of two >= 8, got " + std::to_string(n_points));
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("grid length must be positive and finite");
  return Grid(n_points, length);
}

}  // namespace dnls
