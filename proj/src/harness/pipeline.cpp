#include "dnls/harness/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dnls/asymptotics.hpp"
#include "dnls/errors.hpp"
#include "dnls/harness/io.hpp"
#include "dnls/scattering.hpp"
#include "dnls/spectral.hpp"

namespace dnls::harness {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Owns the output directory: every emitted file lands in the manifest.
class Emitter {
 public:
  Emitter(std::string command, const ExperimentConfig& config, const RunOptions& options)
      : dir_(config.out_dir) {
    manifest_.command = std::move(command);
    manifest_.preset = config.preset;
    manifest_.config_hash = config_hash(config);
    manifest_.code_version = DNLS_VERSION;
    manifest_.n_points = config.solver.n_points;
    manifest_.length = config.solver.length;
    manifest_.seed = config.data.seed.value_or(0);
    manifest_.threads = options.deterministic ? 1 : std::max<std::size_t>(1, options.threads);
    manifest_.deterministic = options.deterministic;
    fs::create_directories(dir_);
    text("config.json", config_to_json(config));
    manifest_.write(dir_);
  }

  const std::string& dir() const { return dir_; }
  RunManifest& manifest() { return manifest_; }

  void table(const Table& t, const std::string& base) {
    write_csv(t, path(base + ".csv"));
    write_table_json(t, path(base + ".json"));
    manifest_.files.push_back(base + ".csv");
    manifest_.files.push_back(base + ".json");
  }

  void text(const std::string& name, const std::string& body) {
    std::ofstream out(path(name), std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path(name) + "'");
    out << body << '\n';
    manifest_.files.push_back(name);
  }

  void checkpoint(const FieldPair& p, const std::string& name) {
    write_checkpoint(p, path(name));
    manifest_.files.push_back(name);
  }

  PipelineResult finish(json diagnostics, int exit_code, std::string kind = {},
                        std::string message = {}) {
    text("summary.json", diagnostics.dump(2));
    manifest_.status = exit_code == 0 ? "ok" : "failed";
    manifest_.diagnostics_json = diagnostics.dump();
    manifest_.write(dir_);
    PipelineResult r;
    r.exit_code = exit_code;
    r.error_kind = std::move(kind);
    r.message = std::move(message);
    r.summary_json = diagnostics.dump(2);
    r.out_dir = dir_;
    return r;
  }

 private:
  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }
  std::string dir_;
  RunManifest manifest_;
};

json initial_json(const InitialDataReport& r) {
  return {{"mass1", r.mass1}, {"mass2", r.mass2}, {"h2_1", r.h2_1},
          {"h2_2", r.h2_2},   {"h11_1", r.h11_1}, {"h11_2", r.h11_2}};
}

void check_box(double length, double required, const std::string& what) {
  if (required > length) {
    std::ostringstream os;
    os << what << ": box length " << length << " is below the ballistic requirement " << required;
    throw ConfigError(os.str());
  }
}

Table ledger_table(const Trajectory& tr) {
  Table t{"mass_ledger", {"t", "mass1", "mass2", "diff", "interaction", "total"}, {}};
  for (const auto& c : tr.checkpoints) {
    const MassLedger& l = c.ledger;
    t.add({fmt(l.t), fmt(l.mass1), fmt(l.mass2), fmt(l.diff), fmt(l.interaction), fmt(l.total())});
  }
  return t;
}

json ledger_diagnostics(const Trajectory& tr) {
  const MassLedger& first = tr.checkpoints.front().ledger;
  double drift = 0.0;
  bool nonincreasing = true;
  for (std::size_t i = 0; i < tr.checkpoints.size(); ++i) {
    const MassLedger& l = tr.checkpoints[i].ledger;
    drift = std::max(drift, std::abs(l.diff - first.diff));
    if (i > 0 && l.total() > tr.checkpoints[i - 1].ledger.total() * (1.0 + 1e-12)) nonincreasing = false;
  }
  const double rel = first.total() > 0.0 ? drift / first.total() : drift;
  return {{"conservation_drift_rel", rel},
          {"conservation_ok", rel <= 1e-8},
          {"total_mass_nonincreasing", nonincreasing},
          {"steps", tr.provenance.steps},
          {"max_boundary_fraction", tr.provenance.max_boundary_fraction}};
}

Table decoupling_table(const std::vector<DecouplingEntry>& h, const std::string& schema) {
  Table t{schema, {"t", "sup_product", "l2_product"}, {}};
  for (const auto& e : h) t.add({fmt(e.t), fmt(e.sup_product), fmt(e.l2_product)});
  return t;
}

double decoupling_ratio(const std::vector<DecouplingEntry>& h) {
  if (h.empty() || !(h.front().sup_product > 0.0)) return 0.0;
  return h.back().sup_product / h.front().sup_product;
}

std::optional<std::string> opt_fmt(const std::optional<double>& v) {
  if (!v) return std::nullopt;
  return fmt(*v);
}

// Profile analysis outputs; returns the diagnostics block, sets `failed` on a diagnostic miss.
json analysis_outputs(const ProfileSeries& series, const ExperimentConfig& cfg, Emitter& em,
                      bool& failed) {
  json d;
  const auto history = decoupling_history(series);
  em.table(decoupling_table(history, "decoupling"), "decoupling");
  d["decoupling_ratio"] = decoupling_ratio(history);
  const std::vector<double> t = series.times();
  const bool analysable = series.size() >= 3 && t.front() <= 2.0 && t.back() >= 100.0;
  d["profile_analysis"] = analysable;
  if (!analysable || !cfg.analysis.profile) return d;

  AnalysisOptions ao;
  ao.gamma = cfg.analysis.gamma;
  ao.deadband = cfg.analysis.deadband;
  const ProfileAnalysis pa = analyze_profiles(series, ao);
  Table prof{"profile",
             {"xi", "m_hat_A", "m_hat_B", "case_label", "fitted_exponent", "beta_plus_re",
              "beta_plus_im", "tail_err"},
             {}};
  for (const CaseRecord& c : pa.cases) {
    prof.add({fmt(c.xi), fmt(c.m_hat), fmt(c.m_hat_b), to_string(c.label),
              opt_fmt(c.fitted_exponent).value_or(""),
              c.beta_plus ? fmt(c.beta_plus->real()) : "", c.beta_plus ? fmt(c.beta_plus->imag()) : "",
              c.beta_plus ? fmt(c.tail_err) : ""});
  }
  em.table(prof, "profile");
  if (cfg.analysis.remainder) {
    Table rem{"remainder", {"t", "bound_ratio", "weighted_sup"}, {}};
    for (const auto& r : pa.remainders) rem.add({fmt(r.t), fmt(r.bound_ratio), fmt(r.weighted_sup)});
    em.table(rem, "remainder");
  }
  const CaseRateSummary cr = case_rate_summary(pa);
  d["deadband"] = pa.deadband;
  d["m_discrepancy"] = pa.m.max_discrepancy;
  d["case_rate"] = {{"checked", cr.checked}, {"bad", cr.bad}, {"worst_rel", cr.worst_rel}};

  std::vector<double> handoffs;
  for (double h : cfg.analysis.handoffs) {
    try {
      (void)series.index_of(h);
      if (h < t.back()) handoffs.push_back(h);
    } catch (const InputError&) {
    }
  }
  if (handoffs.size() >= 2) {
    Table sh{"shadowing", {"xi"}, {}};
    for (double h : handoffs) sh.columns.push_back("err_t" + fmt(h));
    std::size_t improving = 0, total = 0;
    for (std::size_t j : shadowing_indices(series, cfg.analysis.shadowing_frequencies)) {
      const auto e = shadowing_errors(series, j, handoffs);
      std::vector<std::string> row{fmt(series.grid().xi(j))};
      bool mono = true;
      for (std::size_t k = 0; k < e.size(); ++k) {
        row.push_back(fmt(e[k]));
        if (k > 0 && !(e[k] < e[k - 1])) mono = false;
      }
      sh.add(row);
      ++total;
      if (mono) ++improving;
    }
    em.table(sh, "shadowing");
    d["shadowing"] = {{"frequencies", total}, {"monotone", improving}};
    if (improving != total) failed = true;
  }

  if (cfg.analysis.log_decay) {
    const EnvelopeSeries env = envelope_series(series);
    const LogDecayReport rep = fit_log_decay(env.t, env.sup_alpha, CaseLabel::balanced, 100.0, 0.10);
    Table ld{"log_decay", {"t", "sup_alpha1", "sup_alpha1_sqrt_log_t", "linf_sqrt_t_log_t"}, {}};
    double env_first = 0.0, env_max = 0.0;
    for (std::size_t i = 0; i < env.t.size(); ++i) {
      ld.add({fmt(env.t[i]), fmt(env.sup_alpha[i]), fmt(env.sup_alpha[i] * std::sqrt(std::log(env.t[i]))),
              fmt(env.linf_scaled[i])});
      if (env.t[i] >= 100.0) {
        if (env_first == 0.0) env_first = env.linf_scaled[i];
        env_max = std::max(env_max, env.linf_scaled[i]);
      }
    }
    em.table(ld, "log_decay");
    const double growth = env_first > 0.0 ? env_max / env_first : 0.0;
    d["log_decay"] = {{"block_sups", rep.block_sups},
                      {"worst_growth", rep.worst_growth},
                      {"nonincreasing", rep.nonincreasing},
                      {"linf_envelope_growth", growth}};
    if (!rep.nonincreasing || growth > 1.1) failed = true;
  }
  return d;
}

PipelineResult run_failure(Emitter& em, json d, const Error& e, double t) {
  std::ostringstream os;
  os << e.kind() << " at t = " << t << ": " << e.what();
  em.manifest().guard_events.push_back(os.str());
  d["error"] = os.str();
  return em.finish(std::move(d), 1, e.kind(), e.what());
}

void emit_trajectory(const Trajectory& tr, Emitter& em, bool write_checkpoints) {
  em.table(ledger_table(tr), "ledger");
  if (!write_checkpoints) return;
  Table idx{"checkpoint_index", {"index", "t", "file"}, {}};
  for (std::size_t i = 0; i < tr.checkpoints.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "checkpoints/ckpt_%04zu.bin", i);
    em.checkpoint(tr.checkpoints[i].state, name);
    idx.add({std::to_string(i), fmt(tr.checkpoints[i].state.time()), name});
  }
  em.table(idx, "checkpoints/index");
}

}  // namespace

ExperimentConfig prepare(ExperimentConfig config, const RunOptions& options) {
  if (options.seed) config.data.seed = options.seed;
  if (options.out_dir) config.out_dir = *options.out_dir;
  config.validate();
  return config;
}

std::vector<std::size_t> shadowing_indices(const ProfileSeries& series, std::size_t count) {
  const auto& s = series.snapshots.front();
  const std::size_t n = s.alpha1.values.size();
  double peak = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    peak = std::max({peak, std::abs(s.alpha1.values[j]), std::abs(s.alpha2.values[j])});
  std::vector<std::size_t> active;
  for (std::size_t j = 1; j < n; ++j)
    if (std::max(std::abs(s.alpha1.values[j]), std::abs(s.alpha2.values[j])) > 1e-3 * peak)
      active.push_back(j);
  if (active.empty() || count == 0) return {};
  if (active.size() <= count) return active;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(active[k * (active.size() - 1) / (count - 1 ? count - 1 : 1)]);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CaseRateSummary case_rate_summary(const ProfileAnalysis& analysis, double factor, double tol) {
  CaseRateSummary s;
  for (const CaseRecord& c : analysis.cases) {
    if (c.label == CaseLabel::balanced || !c.fitted_exponent) continue;
    const double m = std::abs(c.m_hat);
    if (!(m > factor * analysis.deadband)) continue;
    ++s.checked;
    const double rel = std::abs(*c.fitted_exponent + m) / m;
    s.worst_rel = std::max(s.worst_rel, rel);
    if (rel > tol) ++s.bad;
  }
  return s;
}

EnvelopeSeries envelope_series(const ProfileSeries& series) {
  EnvelopeSeries e;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double t = series.snapshots[k].t;
    if (t <= 1.0) continue;
    e.t.push_back(t);
    e.sup_alpha.push_back(linf_norm(series.snapshots[k].alpha1));
    e.linf_scaled.push_back(linf_norm(series.states[k].u1) * std::sqrt(t * std::log(t)));
  }
  return e;
}

PipelineResult simulate(const ExperimentConfig& config0, const RunOptions& options) {
  const ExperimentConfig cfg = prepare(config0, options);
  const SolverConfig solver = cfg.resolved_solver();
  const FieldPair data = generate_initial_data(cfg.data, solver.grid());
  check_box(solver.length, required_length(data, solver.t_end), "solver");
  Emitter em("simulate", cfg, options);
  em.manifest().initial_data_json = initial_json(initial_data_report(data)).dump();
  em.manifest().write(em.dir());

  json d;
  d["preset"] = cfg.preset;
  const auto t0 = std::chrono::steady_clock::now();
  Trajectory tr;
  try {
    tr = run(solver, data);
  } catch (const GuardViolation& e) {
    return run_failure(em, d, e, e.time);
  } catch (const NonFiniteError& e) {
    return run_failure(em, d, e, e.time);
  }
  tr.provenance.seed = cfg.data.seed.value_or(0);
  em.manifest().timings["run"] = seconds_since(t0);
  emit_trajectory(tr, em, options.write_checkpoints);
  d["ledger"] = ledger_diagnostics(tr);
  bool failed = !d["ledger"]["conservation_ok"].get<bool>();
  if (solver.coupling == Coupling::dissipative && !d["ledger"]["total_mass_nonincreasing"].get<bool>())
    failed = true;

  const auto t1 = std::chrono::steady_clock::now();
  const ProfileSeries series = profile_series(tr, 2.0);
  if (series.size() > 0) d["analysis"] = analysis_outputs(series, cfg, em, failed);
  em.manifest().timings["analysis"] = seconds_since(t1);

  if (cfg.analysis.contrast) {
    SolverConfig other = solver;
    other.coupling = solver.coupling == Coupling::dissipative ? Coupling::conservative
                                                              : Coupling::dissipative;
    const auto t2 = std::chrono::steady_clock::now();
    try {
      const Trajectory ctr = run(other, data);
      const auto h = decoupling_history(profile_series(ctr, 2.0));
      em.table(decoupling_table(h, "decoupling_contrast"), "decoupling_contrast");
      d["contrast"] = {{"coupling", to_string(other.coupling)}, {"decoupling_ratio", decoupling_ratio(h)}};
    } catch (const GuardViolation& e) {
      return run_failure(em, d, e, e.time);
    }
    em.manifest().timings["contrast"] = seconds_since(t2);
  }
  if (failed) return em.finish(d, 1, "diagnostic", "one or more run diagnostics failed");
  return em.finish(d, 0);
}

Trajectory load_trajectory(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const ExperimentConfig cfg = load_config((dir / "config.json").string());
  const Table idx = read_csv((dir / "checkpoints" / "index.csv").string());
  Trajectory tr;
  tr.config = cfg.resolved_solver();
  for (const auto& row : idx.rows) {
    if (row.size() != 3) throw FormatError("checkpoint index row malformed");
    FieldPair p = read_checkpoint((dir / row[2]).string());
    if (!(p.grid() == tr.config.grid()))
      throw FormatError("checkpoint grid does not match the run configuration");
    Checkpoint c{p, mass_ledger(p)};
    tr.checkpoints.push_back(std::move(c));
  }
  if (tr.checkpoints.empty()) throw InputError("run directory has no checkpoints");
  return tr;
}

PipelineResult analyze_directory(const std::string& run_dir, const RunOptions& options) {
  if (!fs::exists(fs::path(run_dir) / "config.json"))
    throw ConfigError("'" + run_dir + "' is not a simulate output directory");
  ExperimentConfig cfg = load_config((fs::path(run_dir) / "config.json").string());
  cfg.out_dir = options.out_dir.value_or((fs::path(run_dir) / "analysis").string());
  cfg.analysis.profile = true;
  cfg.analysis.contrast = false;
  const Trajectory tr = load_trajectory(run_dir);
  Emitter em("analyze", cfg, options);
  json d;
  d["source"] = run_dir;
  d["ledger"] = ledger_diagnostics(tr);
  bool failed = !d["ledger"]["conservation_ok"].get<bool>();
  const auto t0 = std::chrono::steady_clock::now();
  const ProfileSeries series = profile_series(tr, 2.0);
  if (series.size() == 0) throw InputError("no checkpoints at or after t = 2");
  d["analysis"] = analysis_outputs(series, cfg, em, failed);
  em.manifest().timings["analysis"] = seconds_since(t0);
  if (failed) return em.finish(d, 1, "diagnostic", "one or more analysis diagnostics failed");
  return em.finish(d, 0);
}

PipelineResult scatter(const ExperimentConfig& config0, const RunOptions& options) {
  const ExperimentConfig cfg = prepare(config0, options);
  if (!cfg.scatter) throw ConfigError("scatter: configuration has no scatter section");
  const ScatterSpec& sc = *cfg.scatter;
  const Grid g = make_grid(sc.n_points, sc.length);
  const FinalStateSpec spec = build_final_state(sc.support, g);
  Emitter em("scatter", cfg, options);
  em.manifest().n_points = sc.n_points;
  em.manifest().length = sc.length;
  json d{{"preset", cfg.preset},
         {"delta", spec.delta},
         {"kappa", spec.kappa},
         {"mu", spec.mu},
         {"s0", spec.s0},
         {"decoupled", spec.decoupled}};

  if (sc.obstruction) {
    check_box(sc.length, required_length(spec.psi(), sc.T_end), "scatter");
    ObstructionOptions oo;
    oo.T0 = sc.T0;
    oo.T_end = sc.T_end;
    oo.picard.time_samples = sc.time_samples;
    oo.picard.tol = sc.tol;
    const auto t0 = std::chrono::steady_clock::now();
    ObstructionReport rep;
    try {
      rep = obstruction_probe(spec, oo);
    } catch (const GuardViolation& e) {
      return run_failure(em, d, e, e.time);
    }
    em.manifest().timings["probe"] = seconds_since(t0);
    Table t{"obstruction", {"t", "d1", "d2", "threshold"}, {}};
    for (std::size_t i = 0; i < rep.t.size(); ++i)
      t.add({fmt(rep.t[i]), fmt(rep.d1[i]), fmt(rep.d2[i]), fmt(rep.threshold)});
    em.table(t, "obstruction");
    d["obstruction"] = {{"eta", rep.eta},
                        {"threshold", rep.threshold},
                        {"stagnates", rep.stagnates},
                        {"fitted_slope", rep.fitted_slope},
                        {"used_picard", rep.used_picard}};
    bool ok = rep.stagnates;
    if (sc.control) {
      const FinalStateSpec ctl = build_final_state(*sc.control, g);
      const ObstructionReport cr = obstruction_probe(ctl, oo, true);
      Table ct{"obstruction_control", {"t", "d1", "d2"}, {}};
      for (std::size_t i = 0; i < cr.t.size(); ++i)
        ct.add({fmt(cr.t[i]), fmt(cr.d1[i]), fmt(cr.d2[i])});
      em.table(ct, "obstruction_control");
      d["control"] = {{"stagnates", cr.stagnates}, {"fitted_slope", cr.fitted_slope}};
      ok = ok && !cr.stagnates && cr.fitted_slope < 0.0;
    }
    if (!ok) return em.finish(d, 1, "diagnostic", "obstruction probe did not separate the cases");
    return em.finish(d, 0);
  }

  PicardOptions po;
  po.T = sc.T;
  po.T_max = sc.T_max_factor * sc.T;
  po.time_samples = sc.time_samples;
  po.max_iters = sc.max_iters;
  po.tol = sc.tol;
  check_box(sc.length, required_length(spec.psi(), *po.T_max), "scatter");
  const auto t0 = std::chrono::steady_clock::now();
  PicardState st;
  try {
    st = picard_construct(spec, po);
  } catch (const DivergenceError& e) {
    d["error"] = e.what();
    return em.finish(d, 1, e.kind(), e.what());
  }
  em.manifest().timings["picard"] = seconds_since(t0);
  Table pt{"picard", {"iteration", "distance", "ratio"}, {}};
  for (std::size_t k = 0; k < st.distances.size(); ++k)
    pt.add({std::to_string(k), fmt(st.distances[k]), k > 0 ? fmt(st.ratios[k - 1]) : ""});
  em.table(pt, "picard");
  em.checkpoint(st.at_T(), "final_state_at_T.bin");

  SolverConfig fwd;
  fwd.n_points = sc.n_points;
  fwd.length = sc.length;
  fwd.t_start = sc.T;
  fwd.t_end = sc.forward_factor * sc.T;
  fwd.checkpoint_times = default_checkpoints(sc.T, fwd.t_end, sc.forward_checkpoints);
  const auto t1 = std::chrono::steady_clock::now();
  Trajectory tr;
  try {
    tr = run(fwd, st.at_T());
  } catch (const GuardViolation& e) {
    return run_failure(em, d, e, e.time);
  }
  em.manifest().timings["forward"] = seconds_since(t1);
  const ScatteringReport rep = verify_scattering(tr, spec, sc.T);
  Table et{"scattering", {"t", "error"}, {}};
  for (std::size_t i = 0; i < rep.t.size(); ++i) et.add({fmt(rep.t[i]), fmt(rep.error[i])});
  em.table(et, "scattering");
  bool early_ratio_ok = true;
  for (std::size_t k = 0; k < st.ratios.size() && k < 3; ++k)
    if (st.ratios[k] > 0.5) early_ratio_ok = false;
  d["picard"] = {{"converged", st.converged},
                 {"iterate_index", st.iterate_index},
                 {"ratios", st.ratios},
                 {"early_ratio_ok", early_ratio_ok},
                 {"residual", st.residual},
                 {"max_ball_distance", st.max_ball_distance},
                 {"tail_bound", st.tail_bound}};
  d["verify"] = {{"fitted_slope", rep.fitted_slope},
                 {"predicted", rep.predicted},
                 {"fit_ok", rep.fit_ok},
                 {"pass", rep.pass},
                 {"decreasing", rep.decreasing}};
  if (!(st.converged && early_ratio_ok && rep.pass))
    return em.finish(d, 1, "diagnostic", "scattering construction diagnostics failed");
  return em.finish(d, 0);
}

PipelineResult lemmas(const std::string& sweep_name, const RunOptions& options) {
  if (sweep_name != "default") throw ConfigError("unknown lemma sweep '" + sweep_name + "'");
  ExperimentConfig cfg;
  cfg.preset = "lemmas-" + sweep_name;
  cfg.out_dir = options.out_dir.value_or("dnls-out/lemmas");
  cfg.analysis.profile = false;
  Emitter em("lemmas", cfg, options);
  const auto t0 = std::chrono::steady_clock::now();
  const auto ms = lemma_m_sweep();
  em.manifest().timings["lemma_m"] = seconds_since(t0);
  Table mt{"lemma_m", {"p", "q", "C0", "C1", "t0", "Phi0", "C2", "worst_margin", "worst_t", "pass"}, {}};
  std::size_t m_fail = 0;
  for (const auto& e : ms) {
    const auto& p = e.params;
    mt.add({fmt(p.p), fmt(p.q), fmt(p.C0), fmt(p.C1), fmt(p.t0), fmt(p.Phi0), fmt(e.certificate.constant),
            fmt(e.certificate.worst_margin), fmt(e.certificate.worst_t), e.certificate.pass ? "1" : "0"});
    if (!e.certificate.pass) ++m_fail;
  }
  em.table(mt, "lemma_m");
  const auto t1 = std::chrono::steady_clock::now();
  const auto ls = linear_ode_sweep();
  em.manifest().timings["linear_ode"] = seconds_since(t1);
  Table lt{"linear_ode",
           {"name", "y_plus_re", "y_plus_im", "expected_re", "expected_im", "C3", "quadrature_error",
            "worst_margin", "pass"},
           {}};
  std::size_t l_fail = 0;
  for (const auto& e : ls) {
    const auto& c = e.limit.certificate;
    lt.add({e.name, fmt(e.limit.y_plus.real()), fmt(e.limit.y_plus.imag()),
            e.has_expected ? fmt(e.expected.real()) : "", e.has_expected ? fmt(e.expected.imag()) : "",
            fmt(e.limit.C3), fmt(e.limit.quadrature_error), fmt(c.worst_margin), c.pass ? "1" : "0"});
    if (!c.pass) ++l_fail;
  }
  em.table(lt, "linear_ode");
  json d{{"lemma_m", {{"entries", ms.size()}, {"failures", m_fail}}},
         {"linear_ode", {{"entries", ls.size()}, {"failures", l_fail}}}};
  if (m_fail + l_fail > 0) return em.finish(d, 1, "diagnostic", "lemma certificates failed");
  return em.finish(d, 0);
}

PipelineResult sweep(const ExperimentConfig& config0, const RunOptions& options) {
  const ExperimentConfig cfg = prepare(config0, options);
  if (cfg.sweep_epsilon.empty()) throw ConfigError("sweep: sweep_epsilon is empty");
  const SolverConfig solver = cfg.resolved_solver();
  for (double e : cfg.sweep_epsilon) {
    DataSpec ds = cfg.data;
    ds.epsilon = e;
    check_box(solver.length, required_length(generate_initial_data(ds, solver.grid()), solver.t_end),
              "sweep");
  }
  Emitter em("sweep", cfg, options);

  struct Member {
    double epsilon = 0.0;
    std::string status = "ok";
    double drift = 0.0, ratio = 0.0, boundary = 0.0;
    std::size_t steps = 0;
  };
  std::vector<Member> members(cfg.sweep_epsilon.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < members.size(); i = next++) {
      Member& m = members[i];
      m.epsilon = cfg.sweep_epsilon[i];
      DataSpec ds = cfg.data;
      ds.epsilon = m.epsilon;
      try {
        const Trajectory tr = run(solver, generate_initial_data(ds, solver.grid()));
        const json l = ledger_diagnostics(tr);
        m.drift = l["conservation_drift_rel"].get<double>();
        m.boundary = tr.provenance.max_boundary_fraction;
        m.steps = tr.provenance.steps;
        m.ratio = decoupling_ratio(decoupling_history(profile_series(tr, 2.0)));
      } catch (const Error& e) {
        m.status = e.kind();
      }
    }
  };
  const std::size_t nthreads =
      std::min(members.size(), options.deterministic ? std::size_t{1} : std::max<std::size_t>(1, options.threads));
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  em.manifest().timings["sweep"] = seconds_since(t0);

  Table t{"sweep", {"epsilon", "status", "conservation_drift_rel", "decoupling_ratio", "max_boundary_fraction", "steps"}, {}};
  std::size_t failures = 0;
  for (const auto& m : members) {
    t.add({fmt(m.epsilon), m.status, fmt(m.drift), fmt(m.ratio), fmt(m.boundary), std::to_string(m.steps)});
    if (m.status != "ok" || m.drift > 1e-8) ++failures;
  }
  em.table(t, "sweep");
  json d{{"members", members.size()}, {"failures", failures}, {"threads", nthreads}};
  if (failures > 0) return em.finish(d, 1, "diagnostic", "sweep members failed");
  return em.finish(d, 0);
}

}  // namespace dnls::harness
