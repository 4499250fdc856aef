#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dnls/dynamics.hpp"
#include "dnls/errors.hpp"
#include "dnls/logistic.hpp"
#include "dnls/spectral.hpp"
#include "generators.hpp"

using namespace dnls;
using dnls::testing::gaussian;
using dnls::testing::rel_l2_diff;

namespace {

// Independent oracle: classical RK4 on the real pointwise system
// a' = -2ab, b' = -2ab for the squared moduli.
std::pair<double, double> rk4_moduli(double a, double b, double dt, int steps) {
  const double h = dt / steps;
  auto f = [](double x, double y) { return -2.0 * x * y; };
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(a, b);
    const double k2 = f(a + 0.5 * h * k1, b + 0.5 * h * k1);
    const double k3 = f(a + 0.5 * h * k2, b + 0.5 * h * k2);
    const double k4 = f(a + h * k3, b + h * k3);
    const double inc = h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    a += inc;
    b += inc;
  }
  return {a, b};
}

FieldPair pointwise_pair(cplx v1, cplx v2) {
  const Grid g = make_grid(8, 1.0);
  ComplexField a = ComplexField::zeros(g), b = ComplexField::zeros(g);
  for (auto& z : a.values) z = v1;
  for (auto& z : b.values) z = v2;
  return {a, b};
}

SolverConfig small_config(double t_end) {
  SolverConfig c;
  c.n_points = 1024;
  c.length = 120.0;
  c.t_start = 0.0;
  c.t_end = t_end;
  c.dt_policy.kind = DtPolicy::Kind::fixed;
  c.dt_policy.dt = 0.01;
  c.checkpoint_times = {t_end};
  return c;
}

FieldPair gaussian_pair(const Grid& g, double a1, double w1, double a2, double w2) {
  return {gaussian(g, a1, w1, -0.5, 0.3), gaussian(g, a2, w2, 0.7, -0.2)};
}

double pair_rel_diff(const FieldPair& a, const FieldPair& b) {
  ComplexField d1 = a.u1, d2 = a.u2;
  for (std::size_t i = 0; i < d1.values.size(); ++i) {
    d1.values[i] -= b.u1.values[i];
    d2.values[i] -= b.u2.values[i];
  }
  const double num = std::hypot(l2_norm(d1), l2_norm(d2));
  return num / std::hypot(l2_norm(b.u1), l2_norm(b.u2));
}

}  // namespace

TEST_CASE("nonlinear substep closed form") {
  SUBCASE("decoupled components are untouched") {
    const FieldPair p = pointwise_pair({0.3, 0.4}, 0.0);
    const FieldPair q = nonlinear_substep(p, 0.7);
    CHECK(q.u1.values == p.u1.values);
    CHECK(q.u2.values == p.u2.values);
  }

  SUBCASE("balanced point follows a0 / (1 + 2 a0 dt)") {
    const cplx v(0.6, -0.8);  // |v|^2 = 1
    const FieldPair q = nonlinear_substep(pointwise_pair(v, v), 0.25);
    CHECK(std::norm(q.u1.values[0]) == doctest::Approx(1.0 / 1.5).epsilon(1e-15));
    const auto [a, b] = rk4_moduli(1.0, 1.0, 0.25, 10000);
    CHECK(std::abs(std::norm(q.u1.values[0]) - a) < 1e-12);
    CHECK(std::abs(std::norm(q.u2.values[0]) - b) < 1e-12);
  }

  SUBCASE("generic point (2, 1), dt = 0.3 against RK4") {
    const FieldPair q = nonlinear_substep(pointwise_pair(std::sqrt(2.0), 1.0), 0.3);
    const auto [a, b] = rk4_moduli(2.0, 1.0, 0.3, 3000);
    const double an = std::norm(q.u1.values[0]), bn = std::norm(q.u2.values[0]);
    CHECK(std::abs(an - a) < 1e-10);
    CHECK(std::abs(bn - b) < 1e-10);
    CHECK(std::abs((an - bn) - 1.0) < 1e-13);
  }

  SUBCASE("property: RK4 agreement, conserved difference, frozen phases") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> amp(0.0, 3.0), ph(-3.1, 3.1), tau(0.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      const cplx v1 = std::polar(amp(rng), ph(rng)), v2 = std::polar(amp(rng), ph(rng));
      const double dt = tau(rng);
      const FieldPair q = nonlinear_substep(pointwise_pair(v1, v2), dt);
      const cplx w1 = q.u1.values[0], w2 = q.u2.values[0];
      const double a0 = std::norm(v1), b0 = std::norm(v2);
      const auto [a, b] = rk4_moduli(a0, b0, dt, 4000);
      CHECK(std::abs(std::norm(w1) - a) <= 1e-10 * std::max(1.0, a0));
      CHECK(std::abs(std::norm(w2) - b) <= 1e-10 * std::max(1.0, b0));
      CHECK(std::abs((std::norm(w1) - std::norm(w2)) - (a0 - b0)) <= 1e-13 * std::max(1.0, a0 + b0));
      if (std::abs(w1) > 1e-12) CHECK(std::abs(std::arg(w1) - std::arg(v1)) < 1e-13);
      if (std::abs(w2) > 1e-12) CHECK(std::abs(std::arg(w2) - std::arg(v2)) < 1e-13);
      CHECK(std::abs(w1) <= std::abs(v1));
      CHECK(std::abs(w2) <= std::abs(v2));
    }
  }

  SUBCASE("extreme ratios stay finite") {
    const AmplitudeFactors f = logistic_factors(900.0, 1e-6, 50.0);
    CHECK(std::isfinite(f.f1));
    CHECK(std::isfinite(f.f2));
    CHECK(f.f2 >= 0.0);
    const AmplitudeFactors z = logistic_factors(0.0, 5.0, 1e6);
    CHECK(std::isfinite(z.f1));
  }

  SUBCASE("backward substeps are rejected") {
    CHECK_THROWS_AS(nonlinear_substep(pointwise_pair(1.0, 1.0), -0.1), DomainError);
  }
}

TEST_CASE("strang step") {
  const Grid g = make_grid(1024, 120);

  SUBCASE("zero stays zero") {
    const FieldPair z = strang_step(FieldPair::zeros(g), 0.1);
    CHECK(linf_norm(z.u1) == 0.0);
    CHECK(linf_norm(z.u2) == 0.0);
  }

  SUBCASE("u2 = 0 reduces to free evolution") {
    const FieldPair p(gaussian(g, 1.0, 1.0), ComplexField::zeros(g));
    const FieldPair q = strang_step(p, 0.3);
    CHECK(rel_l2_diff(q.u1, free_propagate(p.u1, 0.3)) < 1e-13);
  }

  SUBCASE("second-order convergence against the RK4 reference") {
    const FieldPair p = gaussian_pair(g, 0.8, 1.0, 0.6, 1.5);
    SolverConfig cfg = small_config(0.4);
    cfg.scheme = Scheme::rk4_reference;
    cfg.dt_policy.dt = 1e-3;
    const FieldPair ref = rk4_reference(cfg, p).checkpoints.back().state;
    std::vector<double> err;
    for (double dt : {0.04, 0.02, 0.01}) {
      FieldPair s = p;
      for (int i = 0; i < static_cast<int>(std::lround(0.4 / dt)); ++i) s = strang_step(s, dt);
      err.push_back(pair_rel_diff(s, ref));
    }
    CHECK(std::log2(err[0] / err[1]) >= 1.9);
    CHECK(std::log2(err[1] / err[2]) >= 1.9);
  }
}

TEST_CASE("mass ledger") {
  const Grid g = make_grid(2048, 100);
  const MassLedger z = mass_ledger(FieldPair::zeros(g));
  CHECK(z.mass1 == 0.0);
  CHECK(z.interaction == 0.0);

  ComplexField left = ComplexField::zeros(g), right = ComplexField::zeros(g);
  for (std::size_t n = 0; n < g.size(); ++n) (g.x(n) < 0 ? left : right).values[n] = 1.0;
  CHECK(mass_ledger(FieldPair(left, right)).interaction == 0.0);

  // integral of exp(-x^2) exp(-x^2) = sqrt(pi / 2)
  const MassLedger l = mass_ledger(FieldPair(gaussian(g, 1.0, 1.0), gaussian(g, 1.0, 1.0)));
  CHECK(l.interaction == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-12));
  CHECK(l.mass1 == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(l.diff == 0.0);
}

TEST_CASE("configuration errors") {
  SolverConfig c = small_config(1.0);
  c.t_end = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config(1.0);
  c.checkpoint_times = {0.5, 0.4};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config(1.0);
  c.n_points = 1000;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config(1.0);
  c.coupling = Coupling::conservative;
  CHECK_THROWS_AS(strang_run(c, FieldPair::zeros(c.grid())), ConfigError);

  const auto cps = default_checkpoints(0.0, 1e4);
  CHECK(cps.size() == 40);
  CHECK(cps.front() == 2.0);
  CHECK(cps.back() == 1e4);
}

TEST_CASE("runs") {
  SUBCASE("zero data gives the zero trajectory") {
    SolverConfig c = small_config(2.0);
    c.checkpoint_times = {1.0, 2.0};
    for (Scheme s : {Scheme::strang_exact, Scheme::rk4_reference}) {
      c.scheme = s;
      const Trajectory tr = run(c, FieldPair::zeros(c.grid()));
      REQUIRE(tr.checkpoints.size() == 3);
      for (const auto& cp : tr.checkpoints) {
        CHECK(cp.ledger.total() == 0.0);
        CHECK(linf_norm(cp.state.u1) == 0.0);
      }
    }
  }

  SUBCASE("rk4 reference with u2 = 0 is the free flow") {
    SolverConfig c = small_config(3.0);
    c.scheme = Scheme::rk4_reference;
    const Grid g = c.grid();
    const FieldPair p(gaussian(g, 1.0, 1.0, 0.0, 0.5), ComplexField::zeros(g));
    const Trajectory tr = run(c, p);
    CHECK(rel_l2_diff(tr.checkpoints.back().state.u1, free_propagate(p.u1, 3.0)) < 1e-8);
  }

  SUBCASE("strang and rk4 agree at T = 10 for small data") {
    SolverConfig c = small_config(10.0);
    c.dt_policy.dt = 0.005;
    const Grid g = c.grid();
    const FieldPair p = gaussian_pair(g, 0.1, 1.0, 0.1, 1.5);
    const Trajectory a = run(c, p);
    c.scheme = Scheme::rk4_reference;
    c.dt_policy.dt = 0.01;
    const Trajectory b = run(c, p);
    CHECK(pair_rel_diff(a.checkpoints.back().state, b.checkpoints.back().state) < 1e-6);
  }

  SUBCASE("mass bookkeeping over a long run") {
    SolverConfig c;
    c.n_points = 4096;
    c.length = 3000.0;
    c.t_end = 1000.0;
    const Grid g = c.grid();
    const FieldPair p = {gaussian(g, 0.1 * 2.0, 4.0), gaussian(g, 0.1, 3.0, 2.0)};
    const Trajectory tr = run(c, p);
    const double d0 = tr.checkpoints.front().ledger.diff;
    const double m0 = tr.checkpoints.front().ledger.total();
    for (std::size_t i = 1; i < tr.checkpoints.size(); ++i) {
      const MassLedger& l = tr.checkpoints[i].ledger;
      CHECK(l.total() <= tr.checkpoints[i - 1].ledger.total());
      CHECK(std::abs(l.diff - d0) <= 1e-8 * m0);
      CHECK(l.interaction >= 0.0);
    }
  }

  SUBCASE("boundary guard trips on a box that is too small") {
    SolverConfig c = small_config(30.0);
    c.length = 40.0;
    c.n_points = 512;
    c.checkpoint_times = {10.0, 20.0, 30.0};
    const Grid g = c.grid();
    const FieldPair p(gaussian(g, 0.3, 1.0, 0.0, 1.0), gaussian(g, 0.3, 1.0));
    CHECK_THROWS_AS(run(c, p), GuardViolation);
  }

  SUBCASE("non-finite data is reported") {
    SolverConfig c = small_config(1.0);
    FieldPair p = FieldPair::zeros(c.grid());
    p.u1.values[5] = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(run(c, p), NonFiniteError);
  }
}

TEST_CASE("dissipation law converges at second order") {
  SolverConfig c = small_config(1.0);
  const Grid g = c.grid();
  const FieldPair p = gaussian_pair(g, 1.0, 1.0, 0.9, 1.2);
  const double r1 = dissipation_residual(c, p, 0.02);
  const double r2 = dissipation_residual(c, p, 0.01);
  const double r3 = dissipation_residual(c, p, 0.005);
  CHECK(std::log2(std::abs(r1 / r2)) >= 1.9);
  CHECK(std::log2(std::abs(r2 / r3)) >= 1.9);
}
