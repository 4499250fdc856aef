#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dnls/dynamics.hpp"
#include "dnls/harness/config.hpp"
#include "dnls/profile.hpp"

namespace dnls::harness {

struct RunOptions {
  std::optional<std::string> out_dir;     ///< overrides config.out_dir
  std::optional<std::uint64_t> seed;      ///< overrides config.data.seed
  std::size_t threads = 1;
  bool deterministic = false;             ///< forces a single worker thread
  bool write_checkpoints = true;
};

/// exit_code 0 ok, 1 guard or diagnostic failure. Configuration problems are
/// thrown as ConfigError instead.
struct PipelineResult {
  int exit_code = 0;
  std::string error_kind;  ///< guard, nonfinite, divergence or diagnostic
  std::string message;
  std::string summary_json = "{}";
  std::string out_dir;
};

/// Applies the overrides and validates.
ExperimentConfig prepare(ExperimentConfig config, const RunOptions& options);

/// Run, mass ledger, checkpoints, decoupling and (when enabled and the run
/// spans [2, T >= 100]) the profile analysis.
PipelineResult simulate(const ExperimentConfig& config, const RunOptions& options);
/// Profile analysis of a previous simulate output directory.
PipelineResult analyze_directory(const std::string& run_dir, const RunOptions& options);
PipelineResult scatter(const ExperimentConfig& config, const RunOptions& options);
/// Only the "default" sweep exists.
PipelineResult lemmas(const std::string& sweep, const RunOptions& options);
/// One run per config.sweep_epsilon entry, spread over worker threads.
PipelineResult sweep(const ExperimentConfig& config, const RunOptions& options);

/// Rebuilds a trajectory from a simulate output directory.
Trajectory load_trajectory(const std::string& run_dir);

/// Up to `count` frequency indices spread over the band where the initial
/// profile exceeds 1e-3 of its peak.
std::vector<std::size_t> shadowing_indices(const ProfileSeries& series, std::size_t count);

struct CaseRateSummary {
  std::size_t checked = 0;
  std::size_t bad = 0;
  double worst_rel = 0.0;  ///< max |fitted + |m|| / |m|
};

/// Survivor frequencies with |m| > factor * deadband: fitted exponent of the
/// decaying component against -|m|, relative tolerance `tol`.
CaseRateSummary case_rate_summary(const ProfileAnalysis& analysis, double factor = 3.0,
                                  double tol = 0.2);

struct EnvelopeSeries {
  std::vector<double> t;
  std::vector<double> sup_alpha;     ///< sup_xi |alpha_1|
  std::vector<double> linf_scaled;   ///< ||u_1||_inf (t log t)^{1/2}
};

EnvelopeSeries envelope_series(const ProfileSeries& series);

}  // namespace dnls::harness
