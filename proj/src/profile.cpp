#include "dnls/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dnls/asymptotics.hpp"
#include "dnls/errors.hpp"
#include "dnls/reduce.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

namespace {

ComplexField product_term(const ComplexField& self, const ComplexField& other) {
  ComplexField out = self;
  for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] *= std::norm(other.values[n]);
  return out;
}

double h1_pair(const ComplexField& a, const ComplexField& b) {
  return std::hypot(sobolev_norm(a, 1.0), sobolev_norm(b, 1.0));
}

double japan(double xi) { return std::sqrt(1.0 + xi * xi); }

// Trapezoid in s = log t over the samples, f given per index.
template <class T, class F>
T log_trapz(std::span<const double> t, std::span<const std::size_t> idx, F&& f) {
  T acc{};
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    const std::size_t a = idx[i], b = idx[i + 1];
    acc += 0.5 * std::log(t[b] / t[a]) * (f(a) * t[a] + f(b) * t[b]);
  }
  return acc;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = k;
  return v;
}

std::vector<std::size_t> coarse_indices(std::size_t n) {
  std::vector<std::size_t> v;
  for (std::size_t k = 0; k < n; k += 2) v.push_back(k);
  if (v.back() != n - 1) v.push_back(n - 1);
  return v;
}

}  // namespace

ProfileSnapshot extract_profiles(const FieldPair& pair) {
  const double t = pair.time();
  if (!(t >= 0.0)) throw DomainError("profiles need t >= 0");
  ProfileSnapshot s;
  s.t = t;
  s.alpha1 = forward_transform(free_propagate(pair.u1, -t));
  s.alpha2 = forward_transform(free_propagate(pair.u2, -t));
  return s;
}

const Grid& ProfileSeries::grid() const {
  if (snapshots.empty()) throw InputError("empty profile series");
  return snapshots.front().alpha1.grid;
}

std::vector<double> ProfileSeries::times() const {
  std::vector<double> t;
  t.reserve(snapshots.size());
  for (const auto& s : snapshots) t.push_back(s.t);
  return t;
}

std::vector<double> ProfileSeries::modulus(std::size_t j, int which) const {
  std::vector<double> v;
  v.reserve(snapshots.size());
  for (const auto& s : snapshots)
    v.push_back(std::abs((which == 1 ? s.alpha1 : s.alpha2).values.at(j)));
  return v;
}

std::size_t ProfileSeries::index_of(double t) const {
  for (std::size_t k = 0; k < snapshots.size(); ++k)
    if (std::abs(snapshots[k].t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return k;
  throw InputError("no snapshot at t = " + std::to_string(t));
}

ProfileSeries profile_series(const Trajectory& trajectory, double t_min) {
  ProfileSeries s;
  for (const auto& cp : trajectory.checkpoints) {
    if (cp.state.time() < t_min * (1.0 - 1e-12)) continue;
    s.snapshots.push_back(extract_profiles(cp.state));
    s.states.push_back(cp.state);
  }
  return s;
}

RemainderProbe remainder_probe(const FieldPair& pair, const ProfileSnapshot& snapshot,
                               double gamma) {
  const double t = pair.time();
  if (!(t >= 1.0)) throw DomainError("remainder probe needs t >= 1");
  if (!(gamma > 0.0 && gamma < 1.0 / 12.0)) throw DomainError("gamma must lie in (0, 1/12)");
  const Grid& g = pair.grid();

  RemainderProbe r;
  r.t = t;
  r.gamma = gamma;
  r.R1 = forward_transform(free_propagate(product_term(pair.u1, pair.u2), -t));
  r.R2 = forward_transform(free_propagate(product_term(pair.u2, pair.u1), -t));
  double sup = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const cplx a1 = snapshot.alpha1.values[j], a2 = snapshot.alpha2.values[j];
    r.R1.values[j] = std::norm(a2) * a1 / t - r.R1.values[j];
    r.R2.values[j] = std::norm(a1) * a2 / t - r.R2.values[j];
    const double w = japan(g.xi(j));
    sup = std::max({sup, w * std::abs(r.R1.values[j]), w * std::abs(r.R2.values[j])});
  }
  r.weighted_sup = sup;
  const double size = h1_pair(pair.u1, pair.u2) +
                      h1_pair(apply_J(pair.u1, t), apply_J(pair.u2, t));
  r.bound_ratio = size > 0.0 ? sup * std::pow(t, 1.25 - 3.0 * gamma) / (size * size * size) : 0.0;
  return r;
}

static std::vector<RemainderProbe> remainder_history(const ProfileSeries& series, double gamma) {
  std::vector<RemainderProbe> out;
  out.reserve(series.size());
  for (std::size_t k = 0; k < series.size(); ++k)
    out.push_back(remainder_probe(series.states[k], series.snapshots[k], gamma));
  return out;
}

static MEstimate estimate_m_impl(const ProfileSeries& series,
                                 const std::vector<RemainderProbe>& rem) {
  const std::size_t K = series.size();
  if (K < 3) throw InputError("trajectory too short for m estimation");
  const std::vector<double> t = series.times();
  if (t.front() > 2.0 * (1.0 + 1e-9)) throw InputError("profiles must start at t = 2");
  if (t.back() < 100.0) throw InputError("trajectory must reach t >= 100");
  const std::size_t N = series.grid().size();
  const auto idx = all_indices(K);

  MEstimate m;
  m.a.resize(N);
  m.b.resize(N);
  m.tail.resize(N);
  std::vector<double> rho(K), absrho(K);
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t k = 0; k < K; ++k) {
      const cplx a1 = series.snapshots[k].alpha1.values[j];
      const cplx a2 = series.snapshots[k].alpha2.values[j];
      rho[k] = 2.0 * (std::conj(a1) * rem[k].R1.values[j] - std::conj(a2) * rem[k].R2.values[j]).real();
      absrho[k] = std::abs(rho[k]);
    }
    const auto& first = series.snapshots.front();
    const auto& last = series.snapshots.back();
    m.a[j] = std::norm(last.alpha1.values[j]) - std::norm(last.alpha2.values[j]);
    double tail = 0.0;
    const PowerFit fit = fit_power_decay(t, absrho);
    if (fit.ok() && fit.slope < -1.0) tail = rho.back() * t.back() / (-fit.slope - 1.0);
    m.tail[j] = tail;
    m.b[j] = std::norm(first.alpha1.values[j]) - std::norm(first.alpha2.values[j]) +
             log_trapz<double>(t, idx, [&](std::size_t k) { return rho[k]; }) + tail;
    m.max_discrepancy = std::max(m.max_discrepancy, std::abs(m.a[j] - m.b[j]));
  }
  return m;
}

MEstimate estimate_m(const ProfileSeries& series) {
  return estimate_m_impl(series, remainder_history(series, 1.0 / 24.0));
}

std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::survivor_1: return "survivor_1";
    case CaseLabel::survivor_2: return "survivor_2";
    case CaseLabel::balanced: return "balanced";
  }
  return "balanced";
}

double default_deadband(const MEstimate& m) { return std::max(1e-3, 3.0 * m.max_discrepancy); }

std::vector<CaseLabel> classify(std::span<const double> m_hat, double deadband) {
  if (!(deadband > 0.0)) throw DomainError("deadband must be positive");
  std::vector<CaseLabel> out;
  out.reserve(m_hat.size());
  for (double m : m_hat)
    out.push_back(m > deadband ? CaseLabel::survivor_1
                               : (m < -deadband ? CaseLabel::survivor_2 : CaseLabel::balanced));
  return out;
}

std::string to_string(PowerFit::Status s) {
  switch (s) {
    case PowerFit::Status::ok: return "ok";
    case PowerFit::Status::too_few_points: return "too_few_points";
    case PowerFit::Status::underflow: return "underflow";
  }
  return "ok";
}

PowerFit fit_power_decay(std::span<const double> t, std::span<const double> value) {
  if (t.size() != value.size()) throw InputError("series length mismatch");
  PowerFit f;
  if (t.empty()) return f;
  const double lo = t.back() / 10.0 * (1.0 - 1e-12);
  std::vector<double> x, y;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < lo) continue;
    if (!(std::abs(value[k]) > 1e-13)) {
      f.status = PowerFit::Status::underflow;
      f.points = 0;
      return f;
    }
    x.push_back(std::log(t[k]));
    y.push_back(std::log(std::abs(value[k])));
  }
  f.points = x.size();
  if (x.size() < 8) {
    f.status = PowerFit::Status::too_few_points;
    return f;
  }
  const double n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n, my = pairwise_sum(y) / n;
  std::vector<double> sxy(x.size()), sxx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy[i] = (x[i] - mx) * (y[i] - my);
    sxx[i] = (x[i] - mx) * (x[i] - mx);
  }
  f.slope = pairwise_sum(sxy) / pairwise_sum(sxx);
  f.intercept = my - f.slope * mx;
  f.status = PowerFit::Status::ok;
  return f;
}

LogDecayReport fit_log_decay(std::span<const double> t, std::span<const double> value,
                             CaseLabel label, double t_lo, double slack) {
  if (label != CaseLabel::balanced)
    throw InputError("log-decay fit applies to balanced frequencies only");
  if (t.size() != value.size()) throw InputError("series length mismatch");
  if (t.empty() || t.back() <= t_lo) throw InputError("series does not extend past the window start");
  const double T = t.back();
  const auto blocks = static_cast<std::size_t>(
      std::max(1.0, std::round(2.0 * std::log10(T / t_lo))));
  LogDecayReport r;
  r.block_sups.assign(blocks, 0.0);
  std::vector<bool> seen(blocks, false);
  for (std::size_t b = 0; b < blocks; ++b)
    r.block_starts.push_back(t_lo * std::pow(T / t_lo, static_cast<double>(b) / blocks));
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_lo * (1.0 - 1e-12)) continue;
    const double w = std::abs(value[k]) * std::sqrt(std::log(t[k]));
    r.sup = std::max(r.sup, w);
    auto b = static_cast<std::size_t>(std::floor(blocks * std::log(t[k] / t_lo) / std::log(T / t_lo)));
    b = std::min(b, blocks - 1);
    r.block_sups[b] = std::max(r.block_sups[b], w);
    seen[b] = true;
  }
  std::vector<double> sups;
  std::vector<double> starts;
  for (std::size_t b = 0; b < blocks; ++b)
    if (seen[b]) {
      sups.push_back(r.block_sups[b]);
      starts.push_back(r.block_starts[b]);
    }
  r.block_sups = sups;
  r.block_starts = starts;
  r.worst_growth = sups.size() < 2 ? 1.0 : 0.0;
  for (std::size_t b = 1; b < sups.size(); ++b) {
    const double g = sups[b - 1] > 0.0 ? sups[b] / sups[b - 1]
                                       : (sups[b] > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    r.worst_growth = std::max(r.worst_growth, g);
  }
  r.nonincreasing = r.worst_growth <= 1.0 + slack;
  return r;
}

DecouplingEntry decoupling_metric(const ProfileSnapshot& snapshot) {
  Spectrum p = snapshot.alpha1;
  double sup = 0.0;
  for (std::size_t j = 0; j < p.values.size(); ++j) {
    p.values[j] *= snapshot.alpha2.values[j];
    sup = std::max(sup, std::abs(p.values[j]));
  }
  return {snapshot.t, sup, l2_norm(p)};
}

std::vector<DecouplingEntry> decoupling_history(const ProfileSeries& series) {
  std::vector<DecouplingEntry> out;
  for (const auto& s : series.snapshots) out.push_back(decoupling_metric(s));
  return out;
}

BetaPlus beta_plus_estimate(const ProfileSeries& series,
                            const std::vector<RemainderProbe>& remainders, std::size_t j,
                            int which, CaseLabel label) {
  if (label == CaseLabel::balanced) throw InputError("beta+ is undefined at a balanced frequency");
  if ((which == 1) != (label == CaseLabel::survivor_1) || (which != 1 && which != 2))
    throw InputError("label does not match the surviving component");
  const std::size_t K = series.size();
  if (K < 3 || remainders.size() != K) throw InputError("series and remainders mismatch");
  const std::vector<double> t = series.times();

  std::vector<cplx> a(K), R(K);
  std::vector<double> b2(K), bmod(K), Rmod(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& s = series.snapshots[k];
    a[k] = (which == 1 ? s.alpha1 : s.alpha2).values[j];
    const cplx other = (which == 1 ? s.alpha2 : s.alpha1).values[j];
    b2[k] = std::norm(other);
    bmod[k] = std::abs(other);
    R[k] = (which == 1 ? remainders[k].R1 : remainders[k].R2).values[j];
    Rmod[k] = std::abs(R[k]);
  }

  BetaPlus out;
  const PowerFit bf = fit_power_decay(t, bmod);
  if (bf.status == PowerFit::Status::too_few_points)
    throw InputError("not enough samples for the tail fit");
  double tail_E = 0.0;
  if (bf.ok()) {
    tail_E = bf.slope < 0.0 ? b2.back() / (-2.0 * bf.slope) : std::numeric_limits<double>::infinity();
  }
  const PowerFit rf = fit_power_decay(t, Rmod);
  double tail_R = 0.0;
  if (rf.ok())
    tail_R = rf.slope < -1.0 ? Rmod.back() * t.back() / (-rf.slope - 1.0)
                             : std::numeric_limits<double>::infinity();

  auto evaluate = [&](std::span<const std::size_t> idx, double& E0) {
    // E(s) = int_s^T |other|^2 dtau/tau + tail_E on the chosen samples.
    std::vector<double> E(K, 0.0);
    E[idx.back()] = tail_E;
    for (std::size_t i = idx.size() - 1; i-- > 0;) {
      const std::size_t p = idx[i], q = idx[i + 1];
      E[p] = E[q] + 0.5 * std::log(t[q] / t[p]) * (b2[p] + b2[q]);
    }
    E0 = E[idx.front()];
    const cplx forced = log_trapz<cplx>(t, idx, [&](std::size_t k) { return R[k] * std::exp(-E[k]); });
    return a[idx.front()] * std::exp(-E0) + forced;
  };
  double E0 = 0.0, E0c = 0.0;
  const auto fine_idx = all_indices(K);
  const auto coarse_idx = coarse_indices(K);
  const cplx fine = evaluate(fine_idx, E0);
  const cplx coarse = evaluate(coarse_idx, E0c);
  out.value = fine + (fine - coarse) / 3.0;
  out.quadrature_error = std::abs(fine - coarse) / 3.0;
  out.observed = a.back();
  out.exponent_tail = tail_E;
  out.remainder_tail = tail_R;
  out.tail_err = std::exp(E0) * (std::abs(out.value) * tail_E + tail_R) + out.quadrature_error;
  return out;
}

ProfileAnalysis analyze_profiles(const ProfileSeries& series, const AnalysisOptions& options) {
  ProfileAnalysis out;
  out.remainders = remainder_history(series, options.gamma);
  out.m = estimate_m_impl(series, out.remainders);
  out.deadband = options.deadband ? *options.deadband : default_deadband(out.m);
  const auto labels = classify(out.m.a, out.deadband);
  out.decoupling = decoupling_history(series);

  const Grid& g = series.grid();
  const std::vector<double> t = series.times();
  double peak = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    peak = std::max({peak, std::abs(series.snapshots.front().alpha1.values[j]),
                     std::abs(series.snapshots.front().alpha2.values[j])});
  for (std::size_t j = 0; j < g.size(); ++j) {
    CaseRecord c;
    c.xi = g.xi(j);
    c.m_hat = out.m.a[j];
    c.m_hat_b = out.m.b[j];
    c.r_tail = out.m.b[j] - out.m.a[j];
    c.label = labels[j];
    const double size = std::max(std::abs(series.snapshots.front().alpha1.values[j]),
                                 std::abs(series.snapshots.front().alpha2.values[j]));
    if (c.label != CaseLabel::balanced && size > options.amplitude_floor * peak) {
      const int which = c.label == CaseLabel::survivor_1 ? 1 : 2;
      const PowerFit f = fit_power_decay(t, series.modulus(j, which == 1 ? 2 : 1));
      if (f.ok()) c.fitted_exponent = f.slope;
      try {
        const BetaPlus b = beta_plus_estimate(series, out.remainders, j, which, c.label);
        c.beta_plus = b.value;
        c.tail_err = b.tail_err;
      } catch (const InputError&) {
      }
    }
    out.cases.push_back(c);
  }
  return out;
}

std::vector<double> shadowing_errors(const ProfileSeries& series, std::size_t j,
                                     std::span<const double> handoff_times) {
  const auto& last = series.snapshots.back();
  std::vector<double> out;
  for (double tc : handoff_times) {
    const auto& s = series.snapshots[series.index_of(tc)];
    const ReducedState r = reduced_flow({s.t, s.alpha1.values.at(j), s.alpha2.values.at(j)}, last.t);
    out.push_back(std::hypot(std::abs(last.alpha1.values[j] - r.a1),
                             std::abs(last.alpha2.values[j] - r.a2)));
  }
  return out;
}

}  // namespace dnls
