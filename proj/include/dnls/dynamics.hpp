#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnls/field.hpp"

namespace dnls {

enum class Scheme { strang_exact, rk4_reference };

/// dissipative: L u1 = -i |u2|^2 u1 (the system under study).
/// conservative: L u1 = |u2|^2 u1, the short-range-style contrast system.
enum class Coupling { dissipative, conservative };

std::string to_string(Scheme s);
std::string to_string(Coupling c);

struct DtPolicy {
  enum class Kind { fixed, proportional };
  Kind kind = Kind::proportional;
  double dt = 0.01;          ///< step for fixed policy, and below switch_time
  double switch_time = 10.0; ///< proportional regime starts here
  double rel = 1e-3;         ///< dt = rel * t once t >= switch_time
  double cap = 0.5;

  double step_at(double t) const noexcept;
  void validate() const;
};

struct SolverConfig {
  std::size_t n_points = 1024;
  double length = 80.0;
  double t_start = 0.0;
  double t_end = 1.0;
  DtPolicy dt_policy;
  /// Increasing, within [t_start, t_end]. t_start is always recorded as the
  /// first checkpoint; an empty list means default_checkpoints().
  std::vector<double> checkpoint_times;
  Scheme scheme = Scheme::strang_exact;
  Coupling coupling = Coupling::dissipative;
  /// Abort when mass in the outer 5% of each side exceeds this fraction.
  double guard_fraction = 1e-6;
  bool guard_enabled = true;

  Grid grid() const;
  void validate() const;
  /// checkpoint_times (or the default set) with t_start prepended.
  std::vector<double> resolved_checkpoints() const;
};

/// `count` log-spaced times on [max(t_start, 2), t_end].
std::vector<double> default_checkpoints(double t_start, double t_end, std::size_t count = 40);

struct MassLedger {
  double t = 0.0;
  double mass1 = 0.0;
  double mass2 = 0.0;
  double diff = 0.0;
  double interaction = 0.0;  ///< integral of |u1|^2 |u2|^2
  double total() const noexcept { return mass1 + mass2; }
};

MassLedger mass_ledger(const FieldPair& pair);

/// Fraction of the total mass sitting within 5% of either end of the box.
double boundary_mass_fraction(const FieldPair& pair);

struct Checkpoint {
  FieldPair state;
  MassLedger ledger;
};

struct Provenance {
  Scheme scheme = Scheme::strang_exact;
  Coupling coupling = Coupling::dissipative;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  double max_boundary_fraction = 0.0;
};

struct Trajectory {
  SolverConfig config;
  std::vector<Checkpoint> checkpoints;
  Provenance provenance;

  const Checkpoint& at_time(double t) const;  ///< exact match, else InputError
};

/// Exact pointwise solution of the dissipative coupling over dt >= 0.
/// Throws DomainError for dt < 0 (the backward problem is not attempted).
FieldPair nonlinear_substep(const FieldPair& pair, double dt);

/// Half free step, full nonlinear substep, half free step.
FieldPair strang_step(const FieldPair& pair, double dt);

/// Dispatches on config.scheme.
Trajectory run(const SolverConfig& config, const FieldPair& initial);
Trajectory strang_run(const SolverConfig& config, const FieldPair& initial);

/// Classical RK4 on the profile v = F U(-t) u, so the dispersion is
/// integrated exactly and only the nonlinearity is discretized.
Trajectory rk4_reference(const SolverConfig& config, const FieldPair& initial);

/// Discrete dissipation-law residual M(T) - M(t0) + 4 * trapz(interaction)
/// over unmerged Strang steps of fixed size dt on [t_start, t_end].
double dissipation_residual(const SolverConfig& config, const FieldPair& initial, double dt);

}  // namespace dnls
