#include "dnls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dnls/detail/spectral_ops.hpp"
#include "dnls/errors.hpp"
#include "dnls/fft.hpp"
#include "dnls/logistic.hpp"
#include "dnls/reduce.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

std::string to_string(Scheme s) {
  return s == Scheme::strang_exact ? "strang_exact" : "rk4_reference";
}

std::string to_string(Coupling c) {
  return c == Coupling::dissipative ? "dissipative" : "conservative";
}

double DtPolicy::step_at(double t) const noexcept {
  if (kind == Kind::fixed || t < switch_time) return dt;
  return std::min(cap, rel * std::max(1.0, t));
}

void DtPolicy::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (kind == Kind::proportional) {
    if (!(rel > 0.0) || !(cap > 0.0)) throw ConfigError("proportional dt needs rel > 0 and cap > 0");
    if (!(switch_time >= 0.0)) throw ConfigError("switch_time must be nonnegative");
  }
}

Grid SolverConfig::grid() const { return make_grid(n_points, length); }

void SolverConfig::validate() const {
  (void)grid();
  if (!(t_start >= 0.0)) throw ConfigError("t_start must be >= 0");
  if (!(t_end > t_start)) throw ConfigError("t_end must exceed t_start");
  dt_policy.validate();
  for (std::size_t i = 0; i < checkpoint_times.size(); ++i) {
    const double c = checkpoint_times[i];
    if (c < t_start || c > t_end) throw ConfigError("checkpoint outside [t_start, t_end]");
    if (i > 0 && !(c > checkpoint_times[i - 1]))
      throw ConfigError("checkpoint times must be strictly increasing");
  }
  if (!(guard_fraction > 0.0)) throw ConfigError("guard_fraction must be positive");
}

std::vector<double> default_checkpoints(double t_start, double t_end, std::size_t count) {
  const double lo = std::max(t_start, 2.0);
  std::vector<double> out;
  if (!(t_end > lo) || count < 2) {
    out.push_back(t_end);
    return out;
  }
  const double a = std::log(lo), b = std::log(t_end);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(i + 1 == count ? t_end : (i == 0 ? lo : std::exp(s)));
  }
  return out;
}

std::vector<double> SolverConfig::resolved_checkpoints() const {
  std::vector<double> base =
      checkpoint_times.empty() ? default_checkpoints(t_start, t_end) : checkpoint_times;
  std::vector<double> out{t_start};
  for (double c : base)
    if (c > t_start) out.push_back(c);
  return out;
}

const Checkpoint& Trajectory::at_time(double t) const {
  for (const auto& c : checkpoints)
    if (c.state.time() == t) return c;
  std::ostringstream os;
  os << "trajectory has no checkpoint at t = " << t;
  throw InputError(os.str());
}

MassLedger mass_ledger(const FieldPair& pair) {
  const std::size_t n = pair.grid().size();
  std::vector<double> a(n), b(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::norm(pair.u1.values[i]);
    b[i] = std::norm(pair.u2.values[i]);
    ab[i] = a[i] * b[i];
  }
  const double dx = pair.grid().dx();
  MassLedger l;
  l.t = pair.time();
  l.mass1 = dx * pairwise_sum(a);
  l.mass2 = dx * pairwise_sum(b);
  l.diff = l.mass1 - l.mass2;
  l.interaction = dx * pairwise_sum(ab);
  return l;
}

double boundary_mass_fraction(const FieldPair& pair) {
  const Grid& g = pair.grid();
  const std::size_t n = g.size();
  std::vector<double> all(n), edge(n, 0.0);
  const double limit = 0.45 * g.length();
  for (std::size_t i = 0; i < n; ++i) {
    all[i] = std::norm(pair.u1.values[i]) + std::norm(pair.u2.values[i]);
    if (std::abs(g.x(i)) >= limit) edge[i] = all[i];
  }
  const double total = pairwise_sum(all);
  return total > 0.0 ? pairwise_sum(edge) / total : 0.0;
}

namespace {

void nonlinear_inplace(std::span<cplx> u1, std::span<cplx> u2, double dt, double t) {
  for (std::size_t i = 0; i < u1.size(); ++i) {
    const double a = std::norm(u1[i]);
    const double b = std::norm(u2[i]);
    if (!std::isfinite(a + b)) {
      std::ostringstream os;
      os << "non-finite field value at t = " << t << ", node " << i;
      throw NonFiniteError(os.str(), t);
    }
    const AmplitudeFactors f = logistic_factors(a, b, dt);
    u1[i] *= f.f1;
    u2[i] *= f.f2;
  }
}

void check_initial(const SolverConfig& cfg, const FieldPair& initial) {
  cfg.validate();
  if (!(initial.grid() == cfg.grid())) throw InputError("initial data is not on the configured grid");
  if (!initial.u1.all_finite() || !initial.u2.all_finite())
    throw NonFiniteError("initial data is not finite", cfg.t_start);
}

class Recorder {
 public:
  Recorder(const SolverConfig& cfg, Trajectory& traj) : cfg_(cfg), traj_(traj) {}

  void record(FieldPair pair) {
    if (!pair.u1.all_finite() || !pair.u2.all_finite()) {
      std::ostringstream os;
      os << "non-finite field at checkpoint t = " << pair.time();
      throw NonFiniteError(os.str(), pair.time());
    }
    const double frac = boundary_mass_fraction(pair);
    traj_.provenance.max_boundary_fraction = std::max(traj_.provenance.max_boundary_fraction, frac);
    if (cfg_.guard_enabled && frac > cfg_.guard_fraction) {
      std::ostringstream os;
      os << "boundary mass fraction " << frac << " exceeds " << cfg_.guard_fraction
         << " at t = " << pair.time() << "; enlarge the box";
      throw GuardViolation(os.str(), pair.time());
    }
    MassLedger l = mass_ledger(pair);
    traj_.checkpoints.push_back({std::move(pair), l});
  }

 private:
  const SolverConfig& cfg_;
  Trajectory& traj_;
};

}  // namespace

FieldPair nonlinear_substep(const FieldPair& pair, double dt) {
  if (dt < 0.0) throw DomainError("nonlinear substep is forward-only (dt < 0 rejected)");
  FieldPair out = pair;
  nonlinear_inplace(out.u1.values, out.u2.values, dt, pair.time());
  out.set_time(pair.time() + dt);
  return out;
}

FieldPair strang_step(const FieldPair& pair, double dt) {
  if (!(dt > 0.0)) throw DomainError("strang_step requires dt > 0");
  FieldPair out = pair;
  const auto half = detail::free_phases(pair.grid(), 0.5 * dt);
  detail::apply_multiplier(out.u1.values, half);
  detail::apply_multiplier(out.u2.values, half);
  nonlinear_inplace(out.u1.values, out.u2.values, dt, pair.time());
  detail::apply_multiplier(out.u1.values, half);
  detail::apply_multiplier(out.u2.values, half);
  out.set_time(pair.time() + dt);
  return out;
}

Trajectory run(const SolverConfig& config, const FieldPair& initial) {
  return config.scheme == Scheme::strang_exact ? strang_run(config, initial)
                                               : rk4_reference(config, initial);
}

Trajectory strang_run(const SolverConfig& config, const FieldPair& initial) {
  check_initial(config, initial);
  if (config.coupling != Coupling::dissipative)
    throw ConfigError("the conservative coupling runs under rk4_reference only");

  Trajectory traj;
  traj.config = config;
  traj.provenance.scheme = Scheme::strang_exact;
  traj.provenance.coupling = config.coupling;
  Recorder rec(config, traj);

  const Grid g = config.grid();
  const std::vector<double> cps = config.resolved_checkpoints();
  std::vector<cplx> u1 = initial.u1.values, u2 = initial.u2.values;

  FieldPair first = initial;
  first.set_time(config.t_start);
  rec.record(std::move(first));

  std::vector<cplx> phases;
  double phase_tau = std::numeric_limits<double>::quiet_NaN();
  auto free = [&](double tau) {
    if (tau == 0.0) return;
    if (tau != phase_tau) {
      phases = detail::free_phases(g, tau);
      phase_tau = tau;
    }
    detail::apply_multiplier(u1, phases);
    detail::apply_multiplier(u2, phases);
  };

  // Consecutive half steps of the free flow are merged; the pending half
  // step is flushed only at checkpoints.
  double t = config.t_start;
  double pending = 0.0;
  for (std::size_t idx = 1; idx < cps.size(); ++idx) {
    const double target = cps[idx];
    while (t < target) {
      double dt = config.dt_policy.step_at(t);
      bool hit = false;
      if (target - t <= dt * (1.0 + 1e-9)) {
        dt = target - t;
        hit = true;
      }
      free(pending + 0.5 * dt);
      nonlinear_inplace(u1, u2, dt, t);
      pending = 0.5 * dt;
      t = hit ? target : t + dt;
      ++traj.provenance.steps;
    }
    free(pending);
    pending = 0.0;
    rec.record(FieldPair(ComplexField(g, u1, t), ComplexField(g, u2, t)));
  }
  return traj;
}

Trajectory rk4_reference(const SolverConfig& config, const FieldPair& initial) {
  check_initial(config, initial);

  Trajectory traj;
  traj.config = config;
  traj.provenance.scheme = Scheme::rk4_reference;
  traj.provenance.coupling = config.coupling;
  Recorder rec(config, traj);

  const Grid g = config.grid();
  const std::size_t n = g.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::vector<double> cps = config.resolved_checkpoints();
  const cplx coupling = config.coupling == Coupling::dissipative ? cplx(-1.0, 0.0) : cplx(0.0, -1.0);

  // a_j = FFT(U(-t) u_j), unnormalized.
  auto pull = [&](std::vector<cplx> u, double t) {
    fft::forward(u);
    const auto ph = detail::free_phases(g, t);
    for (std::size_t m = 0; m < n; ++m) u[m] *= std::conj(ph[m]);
    return u;
  };
  auto push = [&](const std::vector<cplx>& a, const std::vector<cplx>& ph) {
    std::vector<cplx> u(n);
    for (std::size_t m = 0; m < n; ++m) u[m] = a[m] * ph[m] * inv_n;
    fft::backward(u);
    return u;
  };

  std::vector<cplx> a1 = pull(initial.u1.values, config.t_start);
  std::vector<cplx> a2 = pull(initial.u2.values, config.t_start);

  FieldPair first = initial;
  first.set_time(config.t_start);
  rec.record(std::move(first));

  std::vector<cplx> k1a(n), k1b(n), k2a(n), k2b(n), k3a(n), k3b(n), k4a(n), k4b(n);
  std::vector<cplx> ta(n), tb(n);

  auto rhs = [&](double t, const std::vector<cplx>& x1, const std::vector<cplx>& x2,
                 const std::vector<cplx>& ph, std::vector<cplx>& d1, std::vector<cplx>& d2) {
    std::vector<cplx> u1 = push(x1, ph), u2 = push(x2, ph);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::norm(u1[i]), b = std::norm(u2[i]);
      if (!std::isfinite(a + b)) {
        std::ostringstream os;
        os << "non-finite field value at t = " << t;
        throw NonFiniteError(os.str(), t);
      }
      d1[i] = b * u1[i];
      d2[i] = a * u2[i];
    }
    fft::forward(d1);
    fft::forward(d2);
    for (std::size_t m = 0; m < n; ++m) {
      const cplx back = coupling * std::conj(ph[m]);
      d1[m] *= back;
      d2[m] *= back;
    }
  };

  double t = config.t_start;
  for (std::size_t idx = 1; idx < cps.size(); ++idx) {
    const double target = cps[idx];
    while (t < target) {
      double dt = config.dt_policy.step_at(t);
      bool hit = false;
      if (target - t <= dt * (1.0 + 1e-9)) {
        dt = target - t;
        hit = true;
      }
      const auto ph0 = detail::free_phases(g, t);
      const auto ph_half = detail::free_phases(g, t + 0.5 * dt);
      const auto ph1 = detail::free_phases(g, t + dt);

      rhs(t, a1, a2, ph0, k1a, k1b);
      for (std::size_t m = 0; m < n; ++m) {
        ta[m] = a1[m] + 0.5 * dt * k1a[m];
        tb[m] = a2[m] + 0.5 * dt * k1b[m];
      }
      rhs(t + 0.5 * dt, ta, tb, ph_half, k2a, k2b);
      for (std::size_t m = 0; m < n; ++m) {
        ta[m] = a1[m] + 0.5 * dt * k2a[m];
        tb[m] = a2[m] + 0.5 * dt * k2b[m];
      }
      rhs(t + 0.5 * dt, ta, tb, ph_half, k3a, k3b);
      for (std::size_t m = 0; m < n; ++m) {
        ta[m] = a1[m] + dt * k3a[m];
        tb[m] = a2[m] + dt * k3b[m];
      }
      rhs(t + dt, ta, tb, ph1, k4a, k4b);
      for (std::size_t m = 0; m < n; ++m) {
        a1[m] += dt / 6.0 * (k1a[m] + 2.0 * k2a[m] + 2.0 * k3a[m] + k4a[m]);
        a2[m] += dt / 6.0 * (k1b[m] + 2.0 * k2b[m] + 2.0 * k3b[m] + k4b[m]);
      }
      t = hit ? target : t + dt;
      ++traj.provenance.steps;
    }
    const auto ph = detail::free_phases(g, t);
    rec.record(FieldPair(ComplexField(g, push(a1, ph), t), ComplexField(g, push(a2, ph), t)));
  }
  return traj;
}

double dissipation_residual(const SolverConfig& config, const FieldPair& initial, double dt) {
  check_initial(config, initial);
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const auto steps = static_cast<std::size_t>(std::llround((config.t_end - config.t_start) / dt));
  if (steps == 0) throw ConfigError("dt larger than the integration window");
  const double h = (config.t_end - config.t_start) / static_cast<double>(steps);

  FieldPair state = initial;
  state.set_time(config.t_start);
  const MassLedger l0 = mass_ledger(state);
  std::vector<double> interaction{l0.interaction};
  interaction.reserve(steps + 1);
  for (std::size_t i = 0; i < steps; ++i) {
    state = strang_step(state, h);
    interaction.push_back(mass_ledger(state).interaction);
  }
  std::vector<double> trap(steps);
  for (std::size_t i = 0; i < steps; ++i) trap[i] = 0.5 * h * (interaction[i] + interaction[i + 1]);
  return mass_ledger(state).total() - l0.total() + 4.0 * pairwise_sum(trap);
}

}  // namespace dnls
