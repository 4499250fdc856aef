#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dnls/dynamics.hpp"
#include "dnls/field.hpp"

namespace dnls {

/// Smooth frequency window amplitude * shape((xi - center) / half_width) *
/// exp(-i xi x0). The bump shape exp(1 - 1/(1 - y^2)) is compactly supported
/// on |y| < 1; the gaussian shape is exp(-y^2 / 2).
struct SpectralWindow {
  enum class Shape { bump, gaussian };
  Shape shape = Shape::bump;
  double center = 0.0;
  double half_width = 1.0;
  double amplitude = 1.0;
  double x0 = 0.0;

  cplx operator()(double xi) const noexcept;
  void validate() const;  ///< ConfigError on nonpositive width or non-finite fields
};

/// Sum of windows; an empty list is the zero function.
struct SupportSpec {
  std::vector<SpectralWindow> component1;
  std::vector<SpectralWindow> component2;
  double s = 2.0;
  std::optional<double> mu;  ///< default (s0 - 1) / 4
};

struct FinalStateSpec {
  Spectrum psi_hat_1;
  Spectrum psi_hat_2;
  double s = 2.0;
  double s0 = 2.0;        ///< min(2, s)
  double delta = 0.0;     ///< ||psi-hat||_{L^inf}
  double kappa = 0.0;     ///< ||<x>^{s0} psi||_{L^2}
  double mu = 0.25;
  bool decoupled = false; ///< max |psi-hat_1 psi-hat_2| <= 1e-14
  /// Analytic windows when built from a SupportSpec; needed by asymptotic_wave.
  std::optional<SupportSpec> windows;

  const Grid& grid() const noexcept { return psi_hat_1.grid; }
  /// psi+ in physical space.
  FieldPair psi() const;
};

/// ConfigError for s <= 1 or mu outside (0, (s0 - 1)/2).
FinalStateSpec build_final_state(const SupportSpec& support, const Grid& grid);

/// Final state from sampled spectra (no analytic windows).
FinalStateSpec final_state_from_spectra(Spectrum psi_hat_1, Spectrum psi_hat_2, double s = 2.0,
                                        std::optional<double> mu = std::nullopt);

struct AsymptoticWave {
  double t = 0.0;
  FieldPair w_sharp;  ///< M(t) D(t) F psi+
  FieldPair w_flat;   ///< U(t) psi+ - w_sharp
};

/// w_sharp(x) = (it)^{-1/2} exp(i x^2 / 2t) psi-hat(x / t) on the x-nodes.
/// DomainError for t < 1; InputError without analytic windows.
AsymptoticWave asymptotic_wave(const FinalStateSpec& spec, double t);

/// U(t) psi+ for both components.
FieldPair free_final_wave(const FinalStateSpec& spec, double t);

/// N_j(v) pulled back: F U(-t) N_j(v) for both components.
std::pair<Spectrum, Spectrum> pulled_back_nonlinearity(const FieldPair& v);

/// sup_k (t_k^{mu + 1/2} ||phi(t_k)||_{L^2} + t_k^{mu} ||J phi(t_k)||_{L^2}),
/// component norms combined in l^2.
double x_norm(const std::vector<FieldPair>& phi, double mu);

struct PicardOptions {
  double T = 50.0;
  std::optional<double> T_max;   ///< default 100 T
  std::size_t time_samples = 64; ///< log-spaced on [T, T_max]
  std::size_t max_iters = 20;
  double tol = 1e-10;
  enum class Start { w_sharp, free_wave };
  Start start = Start::w_sharp;
  /// Reject non-decoupled data (the obstruction probe disables this).
  bool require_decoupled = true;
};

struct PicardState {
  double T = 0.0;
  double T_max = 0.0;
  std::vector<double> times;
  std::vector<FieldPair> v;             ///< final iterate at each time
  std::size_t iterate_index = 0;        ///< iterations until distance < tol
  std::vector<double> distances;        ///< ||v^{k+1} - v^k||_X
  std::vector<double> ratios;           ///< distances[k] / distances[k-1]
  double contraction_ratio = 0.0;       ///< last recorded ratio
  double residual = 0.0;                ///< ||Phi[v] - v||_X at termination
  double max_ball_distance = 0.0;       ///< max over iterates of ||v^k - w_sharp||_X
  double tail_bound = 0.0;              ///< bound on the (T_max, inf) part of the integral
  bool converged = false;

  const FieldPair& at_T() const { return v.front(); }
};

/// Fixed point of Phi[v](t) = U(t) psi+ + int_t^inf U(t - tau) N(v(tau)) dtau.
/// ConfigError for non-decoupled data (unless allowed) or bad options;
/// DivergenceError when the ratio stays above 0.9 for three iterations.
PicardState picard_construct(const FinalStateSpec& spec, const PicardOptions& options = {});

struct ScatteringReport {
  std::vector<double> t;
  std::vector<double> error;   ///< ||u(t) - U(t) psi+||_{L^2}
  double fitted_slope = 0.0;
  bool fit_ok = false;
  double predicted = 0.0;      ///< -min(1/2 + mu, s0/2)
  bool pass = false;           ///< fitted_slope <= predicted + 0.15
  bool decreasing = false;
};

/// Error series over the trajectory checkpoints with t >= t_min.
ScatteringReport verify_scattering(const Trajectory& trajectory, const FinalStateSpec& spec,
                                   double t_min = 1.0);

struct ObstructionOptions {
  double T0 = 100.0;
  double T_end = 1e4;
  PicardOptions picard;      ///< T is overridden by T0
  std::size_t picard_iters = 4;
};

struct ObstructionReport {
  double eta = 0.0;                  ///< min_j ||N_j(psi-hat)||_{L^2}
  std::vector<double> t;             ///< dyadic t with 2t <= T_end
  std::vector<double> d1, d2;        ///< ||alpha_j(2t) - alpha_j(t)||_{L^2}
  double threshold = 0.0;            ///< 0.25 eta log 2
  bool stagnates = false;            ///< min_j d_j(t) >= threshold for every t
  double fitted_slope = 0.0;         ///< log-log slope of max_j d_j over t
  bool used_picard = false;          ///< false when the Picard start failed
};

/// eta by grid quadrature.
double obstruction_eta(const FinalStateSpec& spec);

/// Best-effort construction at T0 followed by a forward run; with
/// `control` set, decoupled data is accepted (the control experiment).
ObstructionReport obstruction_probe(const FinalStateSpec& spec, const ObstructionOptions& options,
                                    bool control = false);

}  // namespace dnls
