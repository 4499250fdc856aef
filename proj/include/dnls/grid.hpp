#pragma once

#include <cstddef>
#include <vector>

namespace dnls {

/// Uniform periodic grid on [-L/2, L/2) together with its dual frequency
/// lattice xi_k = 2*pi*k/L, k in [-N/2, N/2). Both node sets are stored in
/// ascending order; index j of a spectrum corresponds to k = j - N/2.
class Grid {
 public:
  Grid() = default;

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_); }
  double dxi() const noexcept;
  double xi_nyquist() const noexcept;

  double x(std::size_t n) const noexcept {
    return -0.5 * length_ + static_cast<double>(n) * dx();
  }
  double xi(std::size_t j) const noexcept {
    return dxi() * (static_cast<double>(j) - 0.5 * static_cast<double>(n_));
  }

  std::vector<double> x_nodes() const;
  std::vector<double> xi_nodes() const;

  /// Grid whose x-nodes are t * xi-nodes of this grid (target of D(t)).
  Grid dilated(double t) const;

  bool operator==(const Grid&) const = default;

 private:
  friend Grid make_grid(std::size_t, double);
  Grid(std::size_t n, double length) : n_(n), length_(length) {}

  std::size_t n_ = 0;
  double length_ = 0.0;
};

/// Throws ConfigError unless n_points >= 8 is a power of two and length > 0.
Grid make_grid(std::size_t n_points, double length);

}  // namespace dnls
