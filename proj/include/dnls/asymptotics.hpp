#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dnls/field.hpp"

namespace dnls {

/// One frequency's profile pair under the reduced system
/// d/dt a1 = -(1/t)|a2|^2 a1, d/dt a2 = -(1/t)|a1|^2 a2.
struct ReducedState {
  double t = 2.0;
  cplx a1{};
  cplx a2{};
};

/// Exact flow to t_target >= state.t >= 2 (logistic law in s = log t).
/// Throws DomainError when asked to go backward or start before t = 2.
ReducedState reduced_flow(const ReducedState& state, double t_target);

/// Sampled real function of t.
struct SampledSeries {
  std::vector<double> t;
  std::vector<double> value;
  void validate() const;  ///< equal lengths, t increasing, finite values
};

struct LemmaMParams {
  double C0 = 1.0;
  double C1 = 0.0;
  double p = 2.0;
  double q = 2.0;
  double t0 = 2.0;
  double Phi0 = 1.0;

  void validate() const;  ///< ConfigError on C0 <= 0, C1 < 0, p <= 1, q <= 1, t0 < 2
  double p_star() const noexcept { return p / (p - 1.0); }
  /// (1/log 2)((log t0)^{p*} Phi0 + C1 int_2^inf (log tau)^{p*} tau^{-q} dtau)
  ///   + (p*/(C0 p))^{p*-1}, with the integral by double-exponential quadrature.
  double C2() const;
};

struct Certificate {
  bool pass = false;
  double worst_margin = 0.0;  ///< min over samples of 1 - Phi / bound
  double worst_t = 0.0;
  double constant = 0.0;      ///< C2 or C3
  std::size_t samples = 0;
};

/// Checks Phi(t) <= C2 / (log t)^{p*-1} at every sample. Throws InputError
/// if consecutive samples visibly violate the differential inequality.
Certificate lemma_m_certificate(const LemmaMParams& params, const SampledSeries& phi);

/// RK4 in s = log t for the equality case
/// dPhi/dt = -(C0/t)|Phi|^p + C1 t^{-q}, sampled at `samples` log-uniform
/// times on [t0, t_end].
SampledSeries lemma_m_equality_solution(const LemmaMParams& params, double t_end,
                                        std::size_t samples = 400);

/// f(t) = coeff * t^{-exponent} for t beyond the last sample.
struct PowerTail {
  cplx coeff{};
  double exponent = 2.0;
};

/// y' = lambda y + Q on [t0, inf), lambda and Q given by samples on
/// increasing times t[0] = t0 < ... < t[n-1] plus declared power tails.
struct LinearODERecord {
  std::vector<double> t;
  std::vector<cplx> lambda;
  std::vector<cplx> Q;
  PowerTail lambda_tail;
  PowerTail Q_tail;
  cplx y0{};

  /// InputError for mismatched samples or a tail exponent <= 1.
  void validate() const;
};

/// Samples analytic lambda, Q on a log grid of [t0, t_end] and fits each
/// tail to the declared exponent through the last sample.
LinearODERecord make_linear_record(const std::function<cplx(double)>& lambda,
                                   const std::function<cplx(double)>& Q, double t0,
                                   double t_end, double lambda_exponent, double Q_exponent,
                                   cplx y0, std::size_t samples = 2001);

/// RK4 solution of y' = lambda y + Q at the record's sample times, using the
/// analytic coefficient functions for the intermediate stages.
std::vector<cplx> solve_linear_ode(const LinearODERecord& record,
                                   const std::function<cplx(double)>& lambda,
                                   const std::function<cplx(double)>& Q,
                                   std::size_t substeps = 8);

struct LinearLimit {
  cplx y_plus{};
  double C3 = 1.0;
  /// Richardson estimate of the quadrature error in y+; the bound check
  /// allows this much slack.
  double quadrature_error = 0.0;
  Certificate certificate;
};

/// y+ = y(t0) e^{int lambda} + int Q(s) e^{int_s^inf lambda} ds and
/// C3 = exp(int |lambda|), checking
/// |y(t) - y+| <= C3 int_t^inf (|y+||lambda| + |Q|) at every sample.
LinearLimit linear_ode_limit(const LinearODERecord& record, const std::vector<cplx>& y);

struct SweepEntry {
  LemmaMParams params;
  Certificate certificate;
};

/// Full (p, q, C0, C1) grid with the equality ODE integrated to 1e6.
std::vector<SweepEntry> lemma_m_sweep();

struct LinearSweepEntry {
  std::string name;
  LinearLimit limit;
  cplx expected{};       ///< closed-form y+ when available
  bool has_expected = false;
};

/// Synthetic linear-ODE records with known limits.
std::vector<LinearSweepEntry> linear_ode_sweep();

}  // namespace dnls
