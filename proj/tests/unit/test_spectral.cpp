#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dnls/errors.hpp"
#include "dnls/spectral.hpp"
#include "generators.hpp"

using namespace dnls;
using dnls::testing::gaussian;
using dnls::testing::random_field;
using dnls::testing::rel_l2_diff;
using dnls::testing::sup_diff;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("make_grid nodes and preconditions") {
  const Grid g = make_grid(8, 2 * kPi);
  const auto xi = g.xi_nodes();
  for (std::size_t j = 0; j < 8; ++j) CHECK(xi[j] == doctest::Approx(static_cast<double>(j) - 4.0));
  CHECK(g.x(0) == doctest::Approx(-kPi));
  CHECK(g.x(1) == doctest::Approx(-0.75 * kPi));

  CHECK(make_grid(1024, 400).dx() == 0.390625);

  CHECK_THROWS_AS(make_grid(8, -1), ConfigError);
  CHECK_THROWS_AS(make_grid(12, 1), ConfigError);
  CHECK_THROWS_AS(make_grid(4, 1), ConfigError);

  const Grid h = make_grid(64, 10);
  const auto x = h.x_nodes();
  for (std::size_t n = 1; n < x.size(); ++n) CHECK(x[n] > x[n - 1]);
  // symmetric about 0 apart from the single Nyquist node
  for (std::size_t j = 1; j < 64; ++j) CHECK(h.xi(j) == doctest::Approx(-h.xi(64 - j)));
}

TEST_CASE("forward transform of the unit Gaussian is itself") {
  const Grid g = make_grid(1024, 80);
  const Spectrum s = forward_transform(gaussian(g, 1.0, 1.0));
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double xi = g.xi(j);
    err = std::max(err, std::abs(s.values[j] - std::exp(-0.5 * xi * xi)));
  }
  CHECK(err < 1e-10);

  const Spectrum z = forward_transform(ComplexField::zeros(g));
  CHECK(linf_norm(z) == 0.0);
}

TEST_CASE("round trip and Plancherel on seeded fields") {
  const Grid g = make_grid(512, 60);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ComplexField f = dnls::testing::white_noise(g, seed);
    const Spectrum s = forward_transform(f);
    const ComplexField back = inverse_transform(s);
    CHECK(rel_l2_diff(back, f) <= 1e-12);
    CHECK(std::abs(l2_norm(s) - l2_norm(f)) <= 1e-12 * l2_norm(f));
  }
}

TEST_CASE("free propagation") {
  const Grid g = make_grid(1024, 80);
  const ComplexField phi = gaussian(g, 1.0, 1.0);

  SUBCASE("dt = 0 is the identity") {
    const ComplexField same = free_propagate(phi, 0.0);
    CHECK(same.values == phi.values);
  }

  SUBCASE("plane wave is an eigenfunction") {
    const std::size_t j = 512 + 7;
    const double xi = g.xi(j);
    ComplexField wave = ComplexField::zeros(g);
    for (std::size_t n = 0; n < g.size(); ++n) wave.values[n] = std::polar(1.0, xi * g.x(n));
    const double tau = 0.37;
    const ComplexField out = free_propagate(wave, tau);
    const cplx factor = std::polar(1.0, -0.5 * xi * xi * tau);
    double err = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
      err = std::max(err, std::abs(out.values[n] - factor * wave.values[n]));
    CHECK(err < 1e-12);
  }

  SUBCASE("Gaussian matches the closed-form free evolution") {
    // u(t,x) = (1 + i t)^{-1/2} exp(-x^2 / (2 (1 + i t)))
    const double t = 5.0;
    const ComplexField out = free_propagate(phi, t);
    const cplx a(1.0, t);
    double err = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
      const double x = g.x(n);
      err = std::max(err, std::abs(out.values[n] - std::exp(-x * x / (2.0 * a)) / std::sqrt(a)));
    }
    CHECK(err < 1e-9);
    CHECK(out.time == t);
  }

  SUBCASE("unitarity and group law") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const ComplexField f = random_field(g, seed);
      const double s = 0.3 * static_cast<double>(seed), t = -1.7 + 0.1 * static_cast<double>(seed);
      const ComplexField two = free_propagate(free_propagate(f, s), t);
      const ComplexField one = free_propagate(f, s + t);
      CHECK(rel_l2_diff(two, one) < 1e-12);
      CHECK(std::abs(l2_norm(one) - l2_norm(f)) < 1e-12 * l2_norm(f));
    }
  }
}

TEST_CASE("M, D, W operators") {
  SUBCASE("M is unimodular and rejects t = 0") {
    const Grid g = make_grid(256, 30);
    const ComplexField f = random_field(g, 3);
    const ComplexField m = apply_M(f, 2.5);
    for (std::size_t n = 0; n < g.size(); ++n)
      CHECK(std::abs(m.values[n]) == doctest::Approx(std::abs(f.values[n])).epsilon(1e-14));
    CHECK_THROWS_AS(apply_M(f, 0.0), DomainError);
    CHECK_THROWS_AS(apply_D(forward_transform(f), 0.0), DomainError);
    CHECK_THROWS_AS(apply_W(forward_transform(f), 0.0), DomainError);
  }

  SUBCASE("U(t) = M D F M on dilation-matched grids") {
    const std::size_t n = 1024;
    for (double t : {1.0, 2.0, 4.0}) {
      // grid.dilated(t) == grid exactly when L^2 = 2 pi N t
      const Grid g = make_grid(n, std::sqrt(2.0 * kPi * static_cast<double>(n) * t));
      REQUIRE(g.dilated(t).length() == doctest::Approx(g.length()).epsilon(1e-14));
      const ComplexField phi = gaussian(g, 1.0, 1.0, 0.5, 1.5);
      const ComplexField lhs = free_propagate(phi, t);
      ComplexField rhs = apply_M(apply_D(forward_transform(apply_M(phi, t)), t), t);
      rhs.grid = g;  // same lattice up to the last bit of L
      CHECK(rel_l2_diff(rhs, lhs) < 1e-8);
    }
  }

  SUBCASE("W(t) -> 1 no slower than t^{-1/4}") {
    const Grid g = make_grid(1024, 80);
    Spectrum phi = Spectrum::zeros(g);
    for (std::size_t j = 0; j < g.size(); ++j) phi.values[j] = std::exp(-0.5 * g.xi(j) * g.xi(j));
    // ||phi||_{H^1}^2 = sqrt(pi) + sqrt(pi)/2 for the unit Gaussian
    const double h1 = std::sqrt(1.5 * std::sqrt(kPi));
    std::vector<double> logt, logerr, ratio;
    for (double t : {1e2, 1e3, 1e4}) {
      const Spectrum w = apply_W(phi, t);
      const double err = sup_diff(w.values, phi.values);
      logt.push_back(std::log(t));
      logerr.push_back(std::log(err));
      ratio.push_back(err * std::pow(t, 0.25) / h1);
      const Spectrum winv = apply_W(phi, -t);
      CHECK(sup_diff(winv.values, phi.values) * std::pow(t, 0.25) / h1 <= ratio.front() * 1.0001);
    }
    for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i] <= ratio[i - 1]);
    const double slope = (logerr.back() - logerr.front()) / (logt.back() - logt.front());
    CHECK(slope <= -0.25);
  }
}

TEST_CASE("J operator") {
  SUBCASE("t = 0 is multiplication by x") {
    const Grid g = make_grid(128, 20);
    const ComplexField f = random_field(g, 9);
    const ComplexField j = apply_J(f, 0.0);
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(j.values[n] == f.values[n] * g.x(n));
  }

  SUBCASE("||J w(t)|| is constant along the free flow") {
    const Grid g = make_grid(4096, 1400);
    const ComplexField phi = gaussian(g, 1.0, 1.0, 0.0, 0.8);
    const double ref = l2_norm(apply_J(phi, 0.0));
    for (double t : {1.0, 10.0, 100.0}) {
      const ComplexField w = free_propagate(phi, t);
      CHECK(std::abs(l2_norm(apply_J(w, t)) - ref) <= 1e-10 * ref);
    }
  }

  SUBCASE("[d_x, J] = 1 on band-limited fields") {
    const Grid g = make_grid(1024, 80);
    const ComplexField f = gaussian(g, 1.0, 1.5, 0.3, 0.4);
    const double t = 0.7;
    auto dx = [](const ComplexField& u) {
      Spectrum s = forward_transform(u);
      for (std::size_t j = 0; j < s.values.size(); ++j) s.values[j] *= cplx(0.0, j == 0 ? 0.0 : s.grid.xi(j));
      return inverse_transform(s);
    };
    const ComplexField a = dx(apply_J(f, t));
    const ComplexField b = apply_J(dx(f), t);
    double err = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
      err = std::max(err, std::abs(a.values[n] - b.values[n] - f.values[n]));
    CHECK(err < 1e-9);
  }

  SUBCASE("Klainerman ratio stays below 2 along a free Gaussian") {
    const Grid g = make_grid(32768, 14000);
    const ComplexField phi = gaussian(g, 1.0, 1.0);
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
      const ComplexField w = free_propagate(phi, t);
      const double ratio =
          linf_norm(w) * std::sqrt(t) / std::sqrt(l2_norm(w) * l2_norm(apply_J(w, t)));
      CHECK(ratio <= 2.0);
    }
  }
}

TEST_CASE("norm report") {
  const Grid g = make_grid(1024, 80);
  const NormReport zero = norms(ComplexField::zeros(g));
  CHECK(zero.l2 == 0.0);
  CHECK(zero.linf == 0.0);
  CHECK(zero.h1 == 0.0);
  CHECK(zero.h2 == 0.0);
  CHECK(zero.h11 == 0.0);

  const ComplexField phi = gaussian(g, 1.0, 1.0);
  const NormReport r = norms(phi, apply_J(phi, 0.0));
  CHECK(r.l2 * r.l2 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  CHECK(r.linf == doctest::Approx(1.0));
  CHECK(sobolev_norm(phi, 0.0) == doctest::Approx(r.l2).epsilon(1e-12));
  // ||x e^{-x^2/2}||^2 = sqrt(pi)/2
  CHECK(*r.j_l2 * *r.j_l2 == doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-12));
  CHECK(r.h1 > r.l2);
  CHECK(r.h2 > r.h1);
}
