#include "dnls/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "dnls/errors.hpp"
#include "dnls/logistic.hpp"

namespace dnls {

namespace {

std::vector<double> log_grid(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t k = 0; k < n; ++k)
    t[k] = std::exp(la + (lb - la) * static_cast<double>(k) / static_cast<double>(n - 1));
  t.front() = a;
  t.back() = b;
  return t;
}

// Integral of c t^{-e} over [T, inf).
cplx tail_integral(const PowerTail& tail, double T) {
  return tail.coeff * std::pow(T, 1.0 - tail.exponent) / (tail.exponent - 1.0);
}

double tail_integral_abs(const PowerTail& tail, double T) {
  return std::abs(tail.coeff) * std::pow(T, 1.0 - tail.exponent) / (tail.exponent - 1.0);
}

// Cumulative integrals from each sample to the last one, trapezoid in s = log t.
template <class T, class F>
std::vector<T> reverse_cumulative(const std::vector<double>& t, F&& f) {
  const std::size_t n = t.size();
  std::vector<T> out(n, T{});
  for (std::size_t k = n - 1; k-- > 0;) {
    const double ds = std::log(t[k + 1] / t[k]);
    out[k] = out[k + 1] + 0.5 * ds * (f(k) * t[k] + f(k + 1) * t[k + 1]);
  }
  return out;
}

double exp_sinh_integral(const std::function<double(double)>& f, double a) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, a, std::numeric_limits<double>::infinity());
}

}  // namespace

ReducedState reduced_flow(const ReducedState& state, double t_target) {
  if (!(state.t >= 2.0)) throw DomainError("reduced flow starts at t >= 2");
  if (!(t_target >= state.t)) throw DomainError("reduced flow is forward-only");
  const double tau = std::log(t_target / state.t);
  const AmplitudeFactors f = logistic_factors(std::norm(state.a1), std::norm(state.a2), tau);
  return {t_target, state.a1 * f.f1, state.a2 * f.f2};
}

void SampledSeries::validate() const {
  if (t.size() != value.size()) throw InputError("series length mismatch");
  if (t.empty()) throw InputError("empty series");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k]) || !std::isfinite(value[k])) throw InputError("non-finite sample");
    if (k > 0 && !(t[k] > t[k - 1])) throw InputError("sample times must increase");
  }
}

void LemmaMParams::validate() const {
  if (!(C0 > 0.0)) throw ConfigError("C0 must be positive");
  if (!(C1 >= 0.0)) throw ConfigError("C1 must be nonnegative");
  if (!(p > 1.0)) throw ConfigError("p must exceed 1");
  if (!(q > 1.0)) throw ConfigError("q must exceed 1");
  if (!(t0 >= 2.0)) throw ConfigError("t0 must be at least 2");
  if (!std::isfinite(Phi0)) throw ConfigError("Phi0 must be finite");
}

double LemmaMParams::C2() const {
  validate();
  const double ps = p_star();
  double integral = 0.0;
  if (C1 > 0.0) {
    // u = log tau turns the integral into int_{log 2}^inf u^{p*} e^{-(q-1)u} du.
    const double l2 = std::log(2.0);
    integral = exp_sinh_integral(
        [&](double u) { return std::exp(ps * std::log(u) - (q - 1.0) * u); }, l2);
  }
  return (std::pow(std::log(t0), ps) * Phi0 + C1 * integral) / std::log(2.0) +
         std::pow(ps / (C0 * p), ps - 1.0);
}

Certificate lemma_m_certificate(const LemmaMParams& params, const SampledSeries& phi) {
  params.validate();
  phi.validate();
  if (phi.t.front() < params.t0) throw InputError("samples precede t0");

  auto rate = [&](std::size_t k) {  // dPhi/ds bound
    const double t = phi.t[k];
    return -params.C0 * std::pow(std::abs(phi.value[k]), params.p) +
           params.C1 * std::pow(t, 1.0 - params.q);
  };
  for (std::size_t k = 0; k + 1 < phi.t.size(); ++k) {
    const double ds = std::log(phi.t[k + 1] / phi.t[k]);
    const double r0 = rate(k), r1 = rate(k + 1);
    const double allowed = ds * std::max(r0, r1) + 0.05 * ds * (std::abs(r0) + std::abs(r1)) +
                           1e-12 * (1.0 + std::abs(phi.value[k]));
    if (phi.value[k + 1] - phi.value[k] > allowed)
      throw InputError("trajectory violates the differential inequality near t = " +
                       std::to_string(phi.t[k]));
  }

  Certificate c;
  c.constant = params.C2();
  c.samples = phi.t.size();
  c.worst_margin = std::numeric_limits<double>::infinity();
  const double ex = params.p_star() - 1.0;
  for (std::size_t k = 0; k < phi.t.size(); ++k) {
    const double bound = c.constant / std::pow(std::log(phi.t[k]), ex);
    const double margin = 1.0 - phi.value[k] / bound;
    if (margin < c.worst_margin) {
      c.worst_margin = margin;
      c.worst_t = phi.t[k];
    }
  }
  c.pass = c.worst_margin >= 0.0;
  return c;
}

SampledSeries lemma_m_equality_solution(const LemmaMParams& params, double t_end,
                                        std::size_t samples) {
  params.validate();
  if (!(t_end > params.t0) || samples < 2) throw ConfigError("bad sampling window");
  auto f = [&](double s, double y) {
    return -params.C0 * std::pow(std::abs(y), params.p) +
           params.C1 * std::exp((1.0 - params.q) * s);
  };
  SampledSeries out;
  out.t = log_grid(params.t0, t_end, samples);
  out.value.resize(samples);
  out.value[0] = params.Phi0;
  double y = params.Phi0;
  for (std::size_t k = 0; k + 1 < samples; ++k) {
    const double s0 = std::log(out.t[k]), s1 = std::log(out.t[k + 1]);
    const double stiff = params.C0 * params.p * std::pow(std::abs(y) + 1e-300, params.p - 1.0);
    const auto sub = static_cast<std::size_t>(
        std::ceil((s1 - s0) / std::min(1e-3, 0.05 / std::max(stiff, 1e-12))));
    const double h = (s1 - s0) / static_cast<double>(sub);
    double s = s0;
    for (std::size_t i = 0; i < sub; ++i) {
      const double k1 = f(s, y);
      const double k2 = f(s + 0.5 * h, y + 0.5 * h * k1);
      const double k3 = f(s + 0.5 * h, y + 0.5 * h * k2);
      const double k4 = f(s + h, y + h * k3);
      y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      s = s0 + h * static_cast<double>(i + 1);
    }
    out.value[k + 1] = y;
  }
  return out;
}

void LinearODERecord::validate() const {
  if (t.size() < 2 || lambda.size() != t.size() || Q.size() != t.size())
    throw InputError("linear record sample mismatch");
  if (!(t.front() > 0.0)) throw InputError("t0 must be positive");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw InputError("sample times must increase");
  if (!(lambda_tail.exponent > 1.0) || !(Q_tail.exponent > 1.0))
    throw InputError("declared tail is not integrable (exponent <= 1)");
}

LinearODERecord make_linear_record(const std::function<cplx(double)>& lambda,
                                   const std::function<cplx(double)>& Q, double t0,
                                   double t_end, double lambda_exponent, double Q_exponent,
                                   cplx y0, std::size_t samples) {
  if (!(t0 > 0.0) || !(t_end > t0) || samples < 2) throw ConfigError("bad record window");
  LinearODERecord r;
  r.t = log_grid(t0, t_end, samples);
  r.lambda.resize(samples);
  r.Q.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    r.lambda[k] = lambda(r.t[k]);
    r.Q[k] = Q(r.t[k]);
  }
  r.lambda_tail = {r.lambda.back() * std::pow(t_end, lambda_exponent), lambda_exponent};
  r.Q_tail = {r.Q.back() * std::pow(t_end, Q_exponent), Q_exponent};
  r.y0 = y0;
  r.validate();
  return r;
}

std::vector<cplx> solve_linear_ode(const LinearODERecord& record,
                                   const std::function<cplx(double)>& lambda,
                                   const std::function<cplx(double)>& Q,
                                   std::size_t substeps) {
  record.validate();
  if (substeps == 0) throw ConfigError("substeps must be positive");
  auto f = [&](double s, cplx y) {
    const double t = std::exp(s);
    return t * (lambda(t) * y + Q(t));
  };
  std::vector<cplx> y(record.t.size());
  y[0] = record.y0;
  cplx v = record.y0;
  for (std::size_t k = 0; k + 1 < record.t.size(); ++k) {
    const double s0 = std::log(record.t[k]);
    const double h = (std::log(record.t[k + 1]) - s0) / static_cast<double>(substeps);
    for (std::size_t i = 0; i < substeps; ++i) {
      const double s = s0 + h * static_cast<double>(i);
      const cplx k1 = f(s, v);
      const cplx k2 = f(s + 0.5 * h, v + 0.5 * h * k1);
      const cplx k3 = f(s + 0.5 * h, v + 0.5 * h * k2);
      const cplx k4 = f(s + h, v + h * k3);
      v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y[k + 1] = v;
  }
  return y;
}

LinearLimit linear_ode_limit(const LinearODERecord& record, const std::vector<cplx>& y) {
  record.validate();
  if (y.size() != record.t.size()) throw InputError("trajectory length mismatch");
  const double T = record.t.back();
  const cplx lam_tail = tail_integral(record.lambda_tail, T);

  cplx q_tail{};
  if (record.Q_tail.coeff != cplx{}) {
    const PowerTail lt = record.lambda_tail, qt = record.Q_tail;
    auto integrand = [&](double s, bool imag) {
      const cplx v = qt.coeff * std::pow(s, -qt.exponent) * std::exp(tail_integral(lt, s));
      return imag ? v.imag() : v.real();
    };
    q_tail = {exp_sinh_integral([&](double s) { return integrand(s, false); }, T),
              exp_sinh_integral([&](double s) { return integrand(s, true); }, T)};
  }

  // y+ from the samples 0, stride, 2 stride, ...
  auto plus_value = [&](std::size_t stride) {
    std::vector<double> t;
    std::vector<cplx> lam, q;
    for (std::size_t k = 0; k < record.t.size(); k += stride) {
      t.push_back(record.t[k]);
      lam.push_back(record.lambda[k]);
      q.push_back(record.Q[k]);
    }
    std::vector<cplx> Lam = reverse_cumulative<cplx>(t, [&](std::size_t k) { return lam[k]; });
    for (auto& v : Lam) v += lam_tail;
    std::vector<cplx> qe(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) qe[k] = q[k] * std::exp(Lam[k]);
    const auto forced = reverse_cumulative<cplx>(t, [&](std::size_t k) { return qe[k]; });
    return record.y0 * std::exp(Lam[0]) + forced[0] + q_tail;
  };

  const auto& t = record.t;
  std::vector<double> absLam =
      reverse_cumulative<double>(t, [&](std::size_t k) { return std::abs(record.lambda[k]); });
  std::vector<double> absQ =
      reverse_cumulative<double>(t, [&](std::size_t k) { return std::abs(record.Q[k]); });
  for (auto& v : absLam) v += tail_integral_abs(record.lambda_tail, T);
  for (auto& v : absQ) v += tail_integral_abs(record.Q_tail, T);

  LinearLimit out;
  const cplx fine = plus_value(1);
  if ((t.size() - 1) % 2 == 0 && t.size() >= 5) {
    const cplx coarse = plus_value(2);
    out.y_plus = fine + (fine - coarse) / 3.0;
    out.quadrature_error = std::abs(fine - coarse) / 3.0;
  } else {
    out.y_plus = fine;
  }
  out.C3 = std::exp(absLam[0]);
  Certificate& c = out.certificate;
  c.constant = out.C3;
  c.samples = t.size();
  c.worst_margin = std::numeric_limits<double>::infinity();
  c.pass = true;
  const double yp = std::abs(out.y_plus);
  const double slack = out.quadrature_error + 1e-12 * (1.0 + yp);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double bound = out.C3 * (yp * absLam[k] + absQ[k]) + slack;
    const double err = std::abs(y[k] - out.y_plus);
    const double margin = 1.0 - err / bound;
    if (margin < c.worst_margin) {
      c.worst_margin = margin;
      c.worst_t = t[k];
    }
    if (err > bound) c.pass = false;
  }
  return out;
}

std::vector<SweepEntry> lemma_m_sweep() {
  std::vector<SweepEntry> out;
  for (double p : {1.5, 2.0, 3.0})
    for (double q : {1.5, 2.0})
      for (double C0 : {0.5, 2.0})
        for (double C1 : {0.0, 0.1, 1.0})
          for (double Phi0 : {0.05, 1.0, 4.0})
            for (double t0 : {2.0, 20.0}) {
              LemmaMParams prm{C0, C1, p, q, t0, Phi0};
              const SampledSeries phi = lemma_m_equality_solution(prm, 1e6);
              out.push_back({prm, lemma_m_certificate(prm, phi)});
            }
  return out;
}

std::vector<LinearSweepEntry> linear_ode_sweep() {
  std::vector<LinearSweepEntry> out;
  auto add = [&](std::string name, std::function<cplx(double)> lam, std::function<cplx(double)> q,
                 double t0, double t_end, double le, double qe, cplx y0,
                 std::optional<cplx> expected) {
    const LinearODERecord r = make_linear_record(lam, q, t0, t_end, le, qe, y0);
    LinearSweepEntry e;
    e.name = std::move(name);
    e.limit = linear_ode_limit(r, solve_linear_ode(r, lam, q));
    if (expected) {
      e.expected = *expected;
      e.has_expected = true;
    }
    out.push_back(std::move(e));
  };

  const auto zero = [](double) { return cplx{}; };
  add("trivial", zero, zero, 2.0, 1e4, 2.0, 2.0, {0.3, -0.4}, cplx(0.3, -0.4));

  for (double c : {0.2, 1.0, 3.0}) {
    add("power-1.5 c=" + std::to_string(c), [c](double t) { return cplx(-c * std::pow(t, -1.5)); },
        zero, 2.0, 1e8, 1.5, 2.0, 1.0, cplx(std::exp(-2.0 * c / std::sqrt(2.0))));
  }

  // y' = -(1/t^2) y + i/t^2 with y(1) = 0 has y = i (1 - e^{1/t - 1}), y+ = i (1 - e^{-1}).
  add("forced", [](double t) { return cplx(-1.0 / (t * t)); },
      [](double t) { return cplx(0.0, 1.0 / (t * t)); }, 1.0, 1e6, 2.0, 2.0, 0.0,
      cplx(0.0, 1.0 - std::exp(-1.0)));

  add("oscillatory", [](double t) { return cplx(-0.5, 0.8) * std::pow(t, -1.5); },
      [](double t) { return 0.3 * std::polar(1.0, 0.1 * std::log(t)) / (t * t); }, 2.0, 1e8, 1.5,
      2.0, {1.0, 0.5}, std::nullopt);

  // lambda = -|a2|^2/t along a reduced trajectory with m = |a1|^2 - |a2|^2 > 0:
  // a1 keeps its phase and |a1|^2 -> m.
  for (double b0 : {0.25, 0.5}) {
    const ReducedState s0{2.0, std::polar(1.0, 0.7), std::polar(std::sqrt(b0), -1.2)};
    const double m = 1.0 - b0;
    const auto lam = [s0](double t) { return cplx(-std::norm(reduced_flow(s0, t).a2) / t); };
    add("reduced b0=" + std::to_string(b0), lam, zero, 2.0, 1e7, 1.0 + 2.0 * m, 2.0, s0.a1,
        std::polar(std::sqrt(m), 0.7));
  }
  return out;
}

}  // namespace dnls
