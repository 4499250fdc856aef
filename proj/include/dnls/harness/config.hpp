#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dnls/dynamics.hpp"
#include "dnls/scattering.hpp"

namespace dnls::harness {

/// One component of the initial data. gaussian ignores k0 and chirp;
/// modulated multiplies by exp(i (k0 x + chirp x^2 / 2)).
struct ComponentSpec {
  double amplitude = 0.0;
  double width = 1.0;
  double center = 0.0;
  double k0 = 0.0;
  double chirp = 0.0;
};

struct DataSpec {
  enum class Kind { gaussian, modulated, random_bandlimited };
  Kind kind = Kind::gaussian;
  std::array<ComponentSpec, 2> components;
  double epsilon = 1.0;          ///< multiplies every amplitude
  bool symmetric = false;        ///< u2 = u1 exactly
  std::optional<double> mass_ratio;  ///< rescale u2 so ||u1||^2 / ||u2||^2 equals this
  std::optional<std::uint64_t> seed; ///< mandatory for random_bandlimited
  double band = 0.5;             ///< random_bandlimited: |xi| cutoff
};

/// Checkpoint schedule: `log_count` log-spaced times on [max(t_start, 2), t_end]
/// merged with the optional dyadic (2^k) and decade (10^k) times and `extra`.
struct CheckpointSpec {
  std::size_t log_count = 40;
  bool dyadic = false;
  bool decades = false;
  std::vector<double> extra;
};

struct AnalysisSpec {
  bool profile = true;
  bool remainder = true;
  double gamma = 1.0 / 24.0;
  std::optional<double> deadband;
  std::vector<double> handoffs{10.0, 100.0, 1000.0};
  std::size_t shadowing_frequencies = 9;  ///< evenly spread over the active band
  bool log_decay = false;
  /// Also run the dissipative system on the same data (contrast experiments).
  bool contrast = false;
};

struct ScatterSpec {
  SupportSpec support;
  std::size_t n_points = 8192;
  double length = 8192.0;
  double T = 50.0;
  double T_max_factor = 100.0;
  std::size_t time_samples = 64;
  std::size_t max_iters = 20;
  double tol = 1e-10;
  double forward_factor = 10.0;
  std::size_t forward_checkpoints = 20;
  bool obstruction = false;
  double T0 = 100.0;
  double T_end = 1e4;
  std::optional<SupportSpec> control;  ///< decoupled control for the obstruction probe
};

struct ExperimentConfig {
  std::string preset = "custom";
  SolverConfig solver;
  CheckpointSpec checkpoints;
  DataSpec data;
  AnalysisSpec analysis;
  std::optional<ScatterSpec> scatter;
  std::vector<double> sweep_epsilon;  ///< data scales for the sweep command
  std::string out_dir = "dnls-out";

  /// Throws ConfigError on any inconsistency (including a missing seed).
  void validate() const;
  /// SolverConfig with the resolved checkpoint list.
  SolverConfig resolved_solver() const;
};

std::vector<std::string> preset_names();
/// ConfigError for an unknown name.
ExperimentConfig preset(const std::string& name);

/// JSON text; unknown keys anywhere are rejected with ConfigError. Values
/// are checked by validate(), after any command-line overrides.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

/// FNV-1a 64-bit over the canonical JSON form.
std::uint64_t config_hash(const ExperimentConfig& config);
std::uint64_t fnv1a(const std::string& bytes);

struct InitialDataReport {
  double mass1 = 0.0;
  double mass2 = 0.0;
  double h2_1 = 0.0, h2_2 = 0.0;    ///< ||u_j||_{H^2}
  double h11_1 = 0.0, h11_2 = 0.0;  ///< ||<x> u_j||_{H^1}
};

FieldPair generate_initial_data(const DataSpec& spec, const Grid& grid);
InitialDataReport initial_data_report(const FieldPair& data);

/// Box length needed for ballistic spreading to t_final: 2 xi_max t_final,
/// with xi_max enclosing all but 1e-12 of the spectral mass.
double required_length(const FieldPair& data, double t_final);

}  // namespace dnls::harness
