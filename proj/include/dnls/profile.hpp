#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnls/dynamics.hpp"
#include "dnls/field.hpp"

namespace dnls {

/// alpha_j(t, xi) = F U(-t) u_j(t) on the ascending xi-nodes.
struct ProfileSnapshot {
  double t = 0.0;
  Spectrum alpha1;
  Spectrum alpha2;
};

/// Throws DomainError for negative time.
ProfileSnapshot extract_profiles(const FieldPair& pair);

/// Profiles at the checkpoints of a trajectory with t >= t_min, together with
/// the physical states needed for remainder evaluation.
struct ProfileSeries {
  std::vector<ProfileSnapshot> snapshots;
  std::vector<FieldPair> states;

  std::size_t size() const noexcept { return snapshots.size(); }
  const Grid& grid() const;
  std::vector<double> times() const;
  /// |alpha_which(t_k, xi_j)| over k.
  std::vector<double> modulus(std::size_t j, int which) const;
  /// Index of the snapshot at time t (relative tolerance 1e-9), else InputError.
  std::size_t index_of(double t) const;
};

ProfileSeries profile_series(const Trajectory& trajectory, double t_min = 2.0);

/// Remainder R_j = (1/t) N_j(alpha) - F U(-t) N_j(u) with
/// N_1(u) = |u2|^2 u1, N_2(u) = |u1|^2 u2.
struct RemainderProbe {
  double t = 0.0;
  Spectrum R1;
  Spectrum R2;
  double gamma = 1.0 / 24.0;
  /// max_xi <xi>|R_j| t^{5/4 - 3 gamma} / (||u||_{H^1} + ||J u||_{H^1})^3
  double bound_ratio = 0.0;
  double weighted_sup = 0.0;  ///< max_xi <xi> |R_j|
};

/// Throws DomainError unless t >= 1 and 0 < gamma < 1/12.
RemainderProbe remainder_probe(const FieldPair& pair, const ProfileSnapshot& snapshot,
                               double gamma = 1.0 / 24.0);

/// Two estimates of m(xi) = lim |alpha1|^2 - |alpha2|^2.
struct MEstimate {
  std::vector<double> a;         ///< value at the final snapshot
  std::vector<double> b;         ///< value at the first snapshot plus the rho quadrature
  std::vector<double> tail;      ///< power-law tail added to b
  double max_discrepancy = 0.0;  ///< max_xi |a - b|
};

/// Requires snapshots spanning [2, T] with T >= 100; InputError otherwise.
MEstimate estimate_m(const ProfileSeries& series);

enum class CaseLabel { survivor_1, survivor_2, balanced };
std::string to_string(CaseLabel c);

/// max(1e-3, 3 * max |a - b|).
double default_deadband(const MEstimate& m);

/// Throws DomainError unless deadband > 0.
std::vector<CaseLabel> classify(std::span<const double> m_hat, double deadband);

struct PowerFit {
  enum class Status { ok, too_few_points, underflow };
  Status status = Status::too_few_points;
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
  bool ok() const noexcept { return status == Status::ok; }
};
std::string to_string(PowerFit::Status s);

/// Least-squares slope of log|value| against log t over [T/10, T]. Needs at
/// least 8 samples in the window, all above 1e-13.
PowerFit fit_power_decay(std::span<const double> t, std::span<const double> value);

struct LogDecayReport {
  double sup = 0.0;                 ///< sup over the window of value * (log t)^{1/2}
  std::vector<double> block_starts; ///< half-decade blocks
  std::vector<double> block_sups;
  double worst_growth = 0.0;        ///< max ratio of consecutive block sups
  bool nonincreasing = false;       ///< worst_growth <= 1 + slack
};

/// Scans value * (log t)^{1/2} over [t_lo, T]. `label` must be balanced;
/// a survivor frequency is rejected with InputError.
LogDecayReport fit_log_decay(std::span<const double> t, std::span<const double> value,
                             CaseLabel label = CaseLabel::balanced, double t_lo = 100.0,
                             double slack = 0.10);

struct DecouplingEntry {
  double t = 0.0;
  double sup_product = 0.0;  ///< max_xi |alpha1 alpha2|
  double l2_product = 0.0;   ///< ||alpha1 alpha2||_{L^2(dxi)}
};

DecouplingEntry decoupling_metric(const ProfileSnapshot& snapshot);
std::vector<DecouplingEntry> decoupling_history(const ProfileSeries& series);

struct BetaPlus {
  cplx value{};
  cplx observed{};       ///< alpha_which(T, xi)
  double tail_err = 0.0; ///< C3 (|beta| tail_E + tail_R) + quadrature error
  double exponent_tail = 0.0;
  double remainder_tail = 0.0;
  double quadrature_error = 0.0;
};

/// Quadrature of the survivor formula at frequency index j. Throws
/// InputError for a balanced frequency or when the label disagrees with
/// `which`.
BetaPlus beta_plus_estimate(const ProfileSeries& series,
                            const std::vector<RemainderProbe>& remainders, std::size_t j,
                            int which, CaseLabel label);

struct CaseRecord {
  double xi = 0.0;
  double m_hat = 0.0;    ///< estimator A
  double m_hat_b = 0.0;  ///< estimator B
  double r_tail = 0.0;   ///< b - a, the estimated r(T, xi)
  CaseLabel label = CaseLabel::balanced;
  std::optional<double> fitted_exponent;
  std::optional<cplx> beta_plus;
  double tail_err = 0.0;
};

struct ProfileAnalysis {
  double deadband = 0.0;
  MEstimate m;
  std::vector<CaseRecord> cases;
  std::vector<DecouplingEntry> decoupling;
  std::vector<RemainderProbe> remainders;
};

struct AnalysisOptions {
  double gamma = 1.0 / 24.0;
  std::optional<double> deadband;  ///< default_deadband when absent
  /// Frequencies whose initial profile size is below this fraction of the
  /// peak get a record but no fit or beta estimate.
  double amplitude_floor = 1e-6;
};

ProfileAnalysis analyze_profiles(const ProfileSeries& series, const AnalysisOptions& options = {});

/// |(alpha1, alpha2)(T, xi_j) - reduced_flow((alpha1, alpha2)(t_c, xi_j), T)|
/// for each hand-off time t_c (each must be a snapshot time).
std::vector<double> shadowing_errors(const ProfileSeries& series, std::size_t j,
                                     std::span<const double> handoff_times);

}  // namespace dnls
