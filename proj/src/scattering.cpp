#include "dnls/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dnls/errors.hpp"
#include "dnls/profile.hpp"
#include "dnls/reduce.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

namespace {

cplx window_sum(const std::vector<SpectralWindow>& ws, double xi) {
  cplx acc{};
  for (const auto& w : ws) acc += w(xi);
  return acc;
}

Spectrum sample_windows(const std::vector<SpectralWindow>& ws, const Grid& g) {
  Spectrum s = Spectrum::zeros(g);
  // Nyquist mode (j = 0) stays zero to match the propagators.
  for (std::size_t j = 1; j < g.size(); ++j) s.values[j] = window_sum(ws, g.xi(j));
  return s;
}

ComplexField difference(const ComplexField& a, const ComplexField& b) {
  ComplexField out = a;
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] -= b.values[n];
  return out;
}

FieldPair difference(const FieldPair& a, const FieldPair& b) {
  return FieldPair(difference(a.u1, b.u1), difference(a.u2, b.u2));
}

std::vector<FieldPair> difference(const std::vector<FieldPair>& a, const std::vector<FieldPair>& b) {
  std::vector<FieldPair> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(difference(a[i], b[i]));
  return out;
}

double spectrum_distance(const Spectrum& a, const Spectrum& b) {
  std::vector<double> sq(a.values.size());
  for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = std::norm(a.values[j] - b.values[j]);
  return std::sqrt(a.grid.dxi() * pairwise_sum(sq));
}

double weighted_norm(const ComplexField& f, double s) {
  std::vector<double> sq(f.values.size());
  for (std::size_t n = 0; n < sq.size(); ++n) {
    const double x = f.grid.x(n);
    sq[n] = std::pow(1.0 + x * x, s) * std::norm(f.values[n]);
  }
  return std::sqrt(f.grid.dx() * pairwise_sum(sq));
}

double max_abs(const Spectrum& s) {
  double m = 0.0;
  for (const cplx& z : s.values) m = std::max(m, std::abs(z));
  return m;
}

void finish_spec(FinalStateSpec& spec, std::optional<double> mu) {
  if (!std::isfinite(spec.s) || spec.s <= 1.0) throw ConfigError("final state: s must exceed 1");
  if (!(spec.psi_hat_1.grid == spec.psi_hat_2.grid))
    throw InputError("final state: component spectra live on different grids");
  spec.s0 = std::min(2.0, spec.s);
  const double mu_max = 0.5 * (spec.s0 - 1.0);
  spec.mu = mu.value_or(0.5 * mu_max);
  if (!std::isfinite(spec.mu) || spec.mu <= 0.0 || spec.mu >= mu_max)
    throw ConfigError("final state: mu must lie in (0, (s0 - 1)/2)");
  spec.delta = std::max(max_abs(spec.psi_hat_1), max_abs(spec.psi_hat_2));
  const FieldPair psi = spec.psi();
  spec.kappa = std::hypot(weighted_norm(psi.u1, spec.s0), weighted_norm(psi.u2, spec.s0));
  double overlap = 0.0;
  for (std::size_t j = 0; j < spec.psi_hat_1.values.size(); ++j)
    overlap = std::max(overlap, std::abs(spec.psi_hat_1.values[j] * spec.psi_hat_2.values[j]));
  spec.decoupled = overlap <= 1e-14;
}

// Least-squares slope and intercept of log v against log t over positive entries.
std::pair<double, double> loglog_fit(const std::vector<double>& t, const std::vector<double>& v) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(v[i] > 0.0)) continue;
    const double x = std::log(t[i]), y = std::log(v[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y; n += 1;
  }
  if (n < 2) return {0.0, 0.0};
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

struct PicardContext {
  const FinalStateSpec& spec;
  std::vector<double> times;
  double tail_bound = 0.0;

  // Phi[v] sampled at `times`; `is_w_sharp` enables the decoupled shortcut.
  std::vector<FieldPair> apply(const std::vector<FieldPair>& v, bool is_w_sharp) {
    const std::size_t K = times.size();
    const Grid& g = spec.grid();
    std::vector<Spectrum> g1(K, Spectrum::zeros(g)), g2(K, Spectrum::zeros(g));
    std::vector<double> gnorm(K, 0.0);
    if (!(is_w_sharp && spec.decoupled)) {
      for (std::size_t i = 0; i < K; ++i) {
        auto [a, b] = pulled_back_nonlinearity(v[i]);
        gnorm[i] = std::hypot(l2_norm(a), l2_norm(b));
        g1[i] = std::move(a);
        g2[i] = std::move(b);
      }
    }
    tail_bound = 0.0;
    const std::size_t half = K / 2;
    std::vector<double> tt(times.begin() + half, times.end()), gg(gnorm.begin() + half, gnorm.end());
    if (*std::max_element(gg.begin(), gg.end()) > 0.0) {
      const auto [slope, icpt] = loglog_fit(tt, gg);
      const double e = -slope;
      tail_bound = e > 1.0 ? std::exp(icpt) * std::pow(times.back(), 1.0 - e) / (e - 1.0)
                           : std::numeric_limits<double>::infinity();
    }
    std::vector<FieldPair> out(K);
    Spectrum a1 = spec.psi_hat_1, a2 = spec.psi_hat_2;
    for (std::size_t ii = K; ii-- > 0;) {
      if (ii + 1 < K) {
        // trapezoid in log tau: dtau = tau ds
        const double ds = std::log(times[ii + 1] / times[ii]);
        const double wa = 0.5 * ds * times[ii], wb = 0.5 * ds * times[ii + 1];
        for (std::size_t j = 0; j < a1.values.size(); ++j) {
          a1.values[j] += wa * g1[ii].values[j] + wb * g1[ii + 1].values[j];
          a2.values[j] += wa * g2[ii].values[j] + wb * g2[ii + 1].values[j];
        }
      }
      ComplexField f1 = free_propagate(inverse_transform(a1), times[ii]);
      ComplexField f2 = free_propagate(inverse_transform(a2), times[ii]);
      f1.time = f2.time = times[ii];
      out[ii] = FieldPair(std::move(f1), std::move(f2));
    }
    return out;
  }
};

}  // namespace

cplx SpectralWindow::operator()(double xi) const noexcept {
  const double y = (xi - center) / half_width;
  double shape_value = 0.0;
  if (shape == Shape::bump) {
    if (std::abs(y) < 1.0) shape_value = std::exp(1.0 - 1.0 / (1.0 - y * y));
  } else {
    shape_value = std::exp(-0.5 * y * y);
  }
  return std::polar(amplitude * shape_value, -xi * x0);
}

void SpectralWindow::validate() const {
  if (!std::isfinite(center) || !std::isfinite(amplitude) || !std::isfinite(x0) ||
      !std::isfinite(half_width) || half_width <= 0.0)
    throw ConfigError("spectral window: fields must be finite with half_width > 0");
}

FieldPair FinalStateSpec::psi() const {
  return FieldPair(inverse_transform(psi_hat_1), inverse_transform(psi_hat_2));
}

FinalStateSpec build_final_state(const SupportSpec& support, const Grid& grid) {
  for (const auto& w : support.component1) w.validate();
  for (const auto& w : support.component2) w.validate();
  FinalStateSpec spec;
  spec.psi_hat_1 = sample_windows(support.component1, grid);
  spec.psi_hat_2 = sample_windows(support.component2, grid);
  spec.s = support.s;
  spec.windows = support;
  finish_spec(spec, support.mu);
  // the grid can miss the peak; also evaluate at the window centers
  for (const auto* ws : {&support.component1, &support.component2})
    for (const auto& w : *ws) spec.delta = std::max(spec.delta, std::abs(window_sum(*ws, w.center)));
  return spec;
}

FinalStateSpec final_state_from_spectra(Spectrum psi_hat_1, Spectrum psi_hat_2, double s,
                                        std::optional<double> mu) {
  FinalStateSpec spec;
  spec.psi_hat_1 = std::move(psi_hat_1);
  spec.psi_hat_2 = std::move(psi_hat_2);
  spec.s = s;
  finish_spec(spec, mu);
  return spec;
}

FieldPair free_final_wave(const FinalStateSpec& spec, double t) {
  const FieldPair psi = spec.psi();
  ComplexField a = free_propagate(psi.u1, t), b = free_propagate(psi.u2, t);
  a.time = b.time = t;
  return FieldPair(std::move(a), std::move(b));
}

AsymptoticWave asymptotic_wave(const FinalStateSpec& spec, double t) {
  if (!std::isfinite(t) || t < 1.0) throw DomainError("asymptotic wave requires t >= 1");
  if (!spec.windows) throw InputError("asymptotic wave needs analytic spectral windows");
  const Grid& g = spec.grid();
  const cplx factor = std::polar(1.0 / std::sqrt(t), -0.25 * std::numbers::pi);
  ComplexField a = ComplexField::zeros(g, t), b = ComplexField::zeros(g, t);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double x = g.x(n);
    const cplx phase = factor * std::polar(1.0, 0.5 * x * x / t);
    a.values[n] = phase * window_sum(spec.windows->component1, x / t);
    b.values[n] = phase * window_sum(spec.windows->component2, x / t);
  }
  AsymptoticWave w;
  w.t = t;
  w.w_sharp = FieldPair(std::move(a), std::move(b));
  w.w_flat = difference(free_final_wave(spec, t), w.w_sharp);
  return w;
}

std::pair<Spectrum, Spectrum> pulled_back_nonlinearity(const FieldPair& v) {
  const double t = v.time();
  ComplexField n1 = v.u1, n2 = v.u2;
  for (std::size_t n = 0; n < n1.values.size(); ++n) {
    n1.values[n] *= std::norm(v.u2.values[n]);
    n2.values[n] *= std::norm(v.u1.values[n]);
  }
  return {forward_transform(free_propagate(n1, -t)), forward_transform(free_propagate(n2, -t))};
}

double x_norm(const std::vector<FieldPair>& phi, double mu) {
  double best = 0.0;
  for (const FieldPair& p : phi) {
    const double t = p.time();
    const double l2 = std::hypot(l2_norm(p.u1), l2_norm(p.u2));
    const double jl2 = std::hypot(l2_norm(apply_J(p.u1, t)), l2_norm(apply_J(p.u2, t)));
    best = std::max(best, std::pow(t, mu + 0.5) * l2 + std::pow(t, mu) * jl2);
  }
  return best;
}

PicardState picard_construct(const FinalStateSpec& spec, const PicardOptions& options) {
  const double T = options.T;
  const double T_max = options.T_max.value_or(100.0 * T);
  if (!std::isfinite(T) || T < 1.0) throw ConfigError("picard: T must be >= 1");
  if (!std::isfinite(T_max) || T_max <= T) throw ConfigError("picard: T_max must exceed T");
  if (options.time_samples < 4) throw ConfigError("picard: need at least 4 time samples");
  if (options.max_iters < 1) throw ConfigError("picard: max_iters must be positive");
  if (!(options.tol > 0.0)) throw ConfigError("picard: tol must be positive");
  if (options.require_decoupled && !spec.decoupled)
    throw ConfigError("picard: final-state spectra overlap; the data is not decoupled");
  if (options.start == PicardOptions::Start::w_sharp && !spec.windows)
    throw InputError("picard: the w_sharp start needs analytic spectral windows");

  PicardContext ctx{spec, {}, 0.0};
  const std::size_t K = options.time_samples;
  ctx.times.resize(K);
  for (std::size_t i = 0; i < K; ++i)
    ctx.times[i] = T * std::pow(T_max / T, static_cast<double>(i) / static_cast<double>(K - 1));
  ctx.times.back() = T_max;

  std::vector<FieldPair> sharp;
  if (spec.windows) {
    sharp.reserve(K);
    for (double t : ctx.times) sharp.push_back(asymptotic_wave(spec, t).w_sharp);
  }

  PicardState st;
  st.T = T;
  st.T_max = T_max;
  st.times = ctx.times;
  bool is_sharp = options.start == PicardOptions::Start::w_sharp;
  std::vector<FieldPair> v;
  if (is_sharp) {
    v = sharp;
  } else {
    v.reserve(K);
    for (double t : ctx.times) v.push_back(free_final_wave(spec, t));
  }

  std::size_t above = 0;
  for (std::size_t k = 0; k < options.max_iters; ++k) {
    std::vector<FieldPair> next = ctx.apply(v, is_sharp);
    const double d = x_norm(difference(next, v), spec.mu);
    if (!std::isfinite(d)) throw DivergenceError("picard: iterate became non-finite");
    st.distances.push_back(d);
    if (k > 0) {
      const double prev = st.distances[k - 1];
      const double r = prev > 0.0 ? d / prev : 0.0;
      st.ratios.push_back(r);
      st.contraction_ratio = r;
      above = (r > 0.9 && d >= options.tol) ? above + 1 : 0;
    }
    v = std::move(next);
    is_sharp = false;
    if (!sharp.empty())
      st.max_ball_distance = std::max(st.max_ball_distance, x_norm(difference(v, sharp), spec.mu));
    if (d < options.tol) {
      st.iterate_index = k;
      st.converged = true;
      break;
    }
    if (above >= 3)
      throw DivergenceError("picard: contraction ratio stayed above 0.9 for three iterations");
  }
  if (!st.converged) st.iterate_index = options.max_iters;
  st.residual = x_norm(difference(ctx.apply(v, false), v), spec.mu);
  st.tail_bound = ctx.tail_bound;
  st.v = std::move(v);
  return st;
}

ScatteringReport verify_scattering(const Trajectory& trajectory, const FinalStateSpec& spec,
                                   double t_min) {
  ScatteringReport rep;
  for (const Checkpoint& c : trajectory.checkpoints) {
    if (c.state.time() < t_min) continue;
    if (!(c.state.grid() == spec.grid()))
      throw InputError("verify_scattering: trajectory and final state use different grids");
    const ProfileSnapshot s = extract_profiles(c.state);
    rep.t.push_back(s.t);
    rep.error.push_back(std::hypot(spectrum_distance(s.alpha1, spec.psi_hat_1),
                                   spectrum_distance(s.alpha2, spec.psi_hat_2)));
  }
  if (rep.t.empty()) throw InputError("verify_scattering: no checkpoints at or after t_min");
  rep.predicted = -std::min(0.5 + spec.mu, 0.5 * spec.s0);
  const PowerFit fit = fit_power_decay(rep.t, rep.error);
  rep.fit_ok = fit.ok();
  rep.fitted_slope = fit.slope;
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.error.size(); ++i)
    if (rep.error[i] > rep.error[i - 1] * (1.0 + 1e-9) + 1e-13) rep.decreasing = false;
  const double worst = *std::max_element(rep.error.begin(), rep.error.end());
  rep.pass = (rep.fit_ok && rep.fitted_slope <= rep.predicted + 0.15) || worst <= 1e-8;
  return rep;
}

double obstruction_eta(const FinalStateSpec& spec) {
  const auto& a = spec.psi_hat_1.values;
  const auto& b = spec.psi_hat_2.values;
  std::vector<double> n1(a.size()), n2(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double p = std::norm(a[j]), q = std::norm(b[j]);
    n1[j] = q * q * p;
    n2[j] = p * p * q;
  }
  const double dxi = spec.grid().dxi();
  return std::min(std::sqrt(dxi * pairwise_sum(n1)), std::sqrt(dxi * pairwise_sum(n2)));
}

ObstructionReport obstruction_probe(const FinalStateSpec& spec, const ObstructionOptions& options,
                                    bool control) {
  if (!control && spec.decoupled)
    throw ConfigError("obstruction probe: decoupled data scatters; use the control mode");
  if (!std::isfinite(options.T0) || options.T0 < 2.0 || !(options.T_end >= 2.0 * options.T0))
    throw ConfigError("obstruction probe: need 2 <= T0 and T_end >= 2 T0");
  ObstructionReport rep;
  rep.eta = obstruction_eta(spec);
  if (!control && !(rep.eta > 0.0))
    throw ConfigError("obstruction probe: eta vanishes for this data");
  rep.threshold = 0.25 * rep.eta * std::numbers::ln2;

  FieldPair start;
  PicardOptions po = options.picard;
  po.T = options.T0;
  po.require_decoupled = false;
  po.start = PicardOptions::Start::free_wave;
  po.max_iters = std::max<std::size_t>(1, options.picard_iters);
  try {
    start = picard_construct(spec, po).at_T();
    rep.used_picard = true;
  } catch (const DivergenceError&) {
    start = free_final_wave(spec, options.T0);
  }

  std::vector<double> checkpoints;
  for (double t = options.T0; 2.0 * t <= options.T_end * (1.0 + 1e-12); t *= 2.0) {
    rep.t.push_back(t);
    if (checkpoints.empty() || checkpoints.back() < t) checkpoints.push_back(t);
    checkpoints.push_back(2.0 * t);
  }
  checkpoints.erase(checkpoints.begin());  // T0 is the start time

  SolverConfig cfg;
  cfg.n_points = spec.grid().size();
  cfg.length = spec.grid().length();
  cfg.t_start = options.T0;
  cfg.t_end = checkpoints.back();
  cfg.checkpoint_times = checkpoints;
  const Trajectory traj = run(cfg, start);

  std::vector<double> dmax;
  rep.stagnates = true;
  for (double t : rep.t) {
    const ProfileSnapshot a = extract_profiles(traj.at_time(t).state);
    const ProfileSnapshot b = extract_profiles(traj.at_time(2.0 * t).state);
    const double d1 = spectrum_distance(b.alpha1, a.alpha1);
    const double d2 = spectrum_distance(b.alpha2, a.alpha2);
    rep.d1.push_back(d1);
    rep.d2.push_back(d2);
    dmax.push_back(std::max(d1, d2));
    if (std::min(d1, d2) < rep.threshold) rep.stagnates = false;
  }
  if (!(rep.threshold > 0.0)) rep.stagnates = false;
  rep.fitted_slope = loglog_fit(rep.t, dmax).first;
  return rep;
}

}  // namespace dnls
