#include "dnls/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dnls/errors.hpp"
#include "dnls/reduce.hpp"
#include "dnls/spectral.hpp"

namespace dnls::harness {

using json = nlohmann::json;

namespace {

// Strict object reader: every key must be consumed before finish().
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  void get(const char* key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path_ + "." + key + ": wrong type");
    }
  }

  template <class T>
  void get(const char* key, std::optional<T>& out) {
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      seen_.insert(key);
      out.reset();
      return;
    }
    T v{};
    get(key, v);
    out = v;
  }

  const json& sub(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string child(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key " + path_ + "." + it.key());
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class E>
E parse_enum(const std::string& v, std::initializer_list<std::pair<const char*, E>> table,
             const std::string& where) {
  for (const auto& [name, e] : table)
    if (v == name) return e;
  throw ConfigError(where + ": unknown value '" + v + "'");
}

std::string kind_name(DataSpec::Kind k) {
  switch (k) {
    case DataSpec::Kind::gaussian: return "gaussian";
    case DataSpec::Kind::modulated: return "modulated";
    case DataSpec::Kind::random_bandlimited: return "random-bandlimited";
  }
  return "gaussian";
}

std::string shape_name(SpectralWindow::Shape s) {
  return s == SpectralWindow::Shape::bump ? "bump" : "gaussian";
}

json windows_json(const std::vector<SpectralWindow>& ws) {
  json a = json::array();
  for (const auto& w : ws)
    a.push_back({{"shape", shape_name(w.shape)}, {"center", w.center}, {"half_width", w.half_width},
                 {"amplitude", w.amplitude}, {"x0", w.x0}});
  return a;
}

json support_json(const SupportSpec& s) {
  json j{{"component1", windows_json(s.component1)}, {"component2", windows_json(s.component2)},
         {"s", s.s}};
  j["mu"] = s.mu ? json(*s.mu) : json(nullptr);
  return j;
}

std::vector<SpectralWindow> parse_windows(const json& a, const std::string& path) {
  if (!a.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<SpectralWindow> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Obj o(a[i], path + "[" + std::to_string(i) + "]");
    SpectralWindow w;
    std::string shape = "bump";
    o.get("shape", shape);
    w.shape = parse_enum<SpectralWindow::Shape>(
        shape, {{"bump", SpectralWindow::Shape::bump}, {"gaussian", SpectralWindow::Shape::gaussian}},
        path + ".shape");
    o.get("center", w.center);
    o.get("half_width", w.half_width);
    o.get("amplitude", w.amplitude);
    o.get("x0", w.x0);
    o.finish();
    out.push_back(w);
  }
  return out;
}

SupportSpec parse_support(const json& j, const std::string& path) {
  Obj o(j, path);
  SupportSpec s;
  if (o.has("component1")) s.component1 = parse_windows(o.sub("component1"), o.child("component1"));
  if (o.has("component2")) s.component2 = parse_windows(o.sub("component2"), o.child("component2"));
  o.get("s", s.s);
  o.get("mu", s.mu);
  o.finish();
  return s;
}

std::vector<double> merged_checkpoints(const CheckpointSpec& c, double t_start, double t_end) {
  // (time, exact) pairs; exact times win over nearby log-grid points
  std::vector<std::pair<double, bool>> v;
  if (c.log_count >= 2)
    for (double t : default_checkpoints(t_start, t_end, c.log_count)) v.emplace_back(t, false);
  v.emplace_back(t_end, true);
  const double lo = std::max(t_start, 2.0);
  if (c.dyadic)
    for (double t = 2.0; t <= t_end; t *= 2.0)
      if (t >= lo) v.emplace_back(t, true);
  if (c.decades)
    for (double t = 10.0; t <= t_end; t *= 10.0)
      if (t >= lo) v.emplace_back(t, true);
  for (double t : c.extra) v.emplace_back(t, true);
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, bool>> out;
  for (const auto& e : v) {
    if (e.first <= t_start || e.first > t_end) continue;
    if (!out.empty() && std::abs(e.first - out.back().first) <= 1e-9 * e.first) {
      if (e.second && !out.back().second) out.back() = e;
      continue;
    }
    out.push_back(e);
  }
  std::vector<double> times;
  for (const auto& e : out) times.push_back(e.first);
  return times;
}

// Smallest xi such that the spectral mass outside [-xi, xi] is below 1e-12 of the total.
double spectral_extent(const ComplexField& f) {
  const Spectrum s = forward_transform(f);
  const std::size_t n = s.values.size();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = std::norm(s.values[j]);
  const double total = pairwise_sum(w);
  if (!(total > 0.0)) return 0.0;
  std::vector<std::pair<double, double>> by_freq(n);
  for (std::size_t j = 0; j < n; ++j) by_freq[j] = {std::abs(s.grid.xi(j)), w[j]};
  std::sort(by_freq.begin(), by_freq.end());
  double outside = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    outside += by_freq[k].second;
    if (outside > 1e-12 * total) return by_freq[k].first;
  }
  return 0.0;
}

}  // namespace

void ExperimentConfig::validate() const {
  solver.dt_policy.validate();
  (void)solver.grid();
  if (!(solver.t_start >= 0.0) || !(solver.t_end > solver.t_start))
    throw ConfigError("solver: need 0 <= t_start < t_end");
  resolved_solver().validate();
  if (data.kind == DataSpec::Kind::random_bandlimited && !data.seed)
    throw ConfigError("data: random-bandlimited data requires a seed");
  if (!std::isfinite(data.epsilon) || data.epsilon < 0.0)
    throw ConfigError("data: epsilon must be finite and >= 0");
  for (const auto& c : data.components)
    if (!std::isfinite(c.amplitude) || !(c.width > 0.0) || !std::isfinite(c.center) ||
        !std::isfinite(c.k0) || !std::isfinite(c.chirp))
      throw ConfigError("data: component fields must be finite with width > 0");
  if (data.mass_ratio && !(*data.mass_ratio > 0.0))
    throw ConfigError("data: mass_ratio must be positive");
  if (data.kind == DataSpec::Kind::random_bandlimited && !(data.band > 0.0))
    throw ConfigError("data: band must be positive");
  if (!(analysis.gamma > 0.0 && analysis.gamma < 1.0 / 12.0))
    throw ConfigError("analysis: gamma must lie in (0, 1/12)");
  if (analysis.deadband && !(*analysis.deadband > 0.0))
    throw ConfigError("analysis: deadband must be positive");
  for (double e : sweep_epsilon)
    if (!std::isfinite(e) || e < 0.0) throw ConfigError("sweep: epsilon values must be >= 0");
  if (scatter) {
    const ScatterSpec& s = *scatter;
    (void)make_grid(s.n_points, s.length);
    if (!(s.T >= 1.0) || !(s.T_max_factor >= 10.0) || !(s.forward_factor > 1.0) ||
        s.time_samples < 4 || s.max_iters < 1 || !(s.tol > 0.0) || s.forward_checkpoints < 8)
      throw ConfigError("scatter: invalid construction parameters");
    if (s.obstruction && !(s.T0 >= 2.0 && s.T_end >= 2.0 * s.T0))
      throw ConfigError("scatter: need T0 >= 2 and T_end >= 2 T0");
  }
  if (out_dir.empty()) throw ConfigError("output directory must not be empty");
}

SolverConfig ExperimentConfig::resolved_solver() const {
  SolverConfig s = solver;
  if (s.checkpoint_times.empty())
    s.checkpoint_times = merged_checkpoints(checkpoints, s.t_start, s.t_end);
  return s;
}

std::vector<std::string> preset_names() {
  return {"decoupling-headline", "symmetric-log-decay", "short-range-contrast", "scatter-roundtrip",
          "obstruction", "quick"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  c.out_dir = "dnls-out/" + name;
  auto headline_grid = [&] {
    c.solver.n_points = 4096;
    c.solver.length = 16384.0;
    c.solver.t_end = 1e4;
    c.checkpoints.log_count = 60;
    c.checkpoints.dyadic = true;
    c.checkpoints.decades = true;
  };
  if (name == "decoupling-headline") {
    headline_grid();
    c.data.epsilon = 0.1;
    c.data.components[0] = {1.5, 7.0, 0.0, 0.0, 0.0};
    c.data.components[1] = {0.5, 10.0, 0.0, 0.0, 0.0};
    c.sweep_epsilon = {0.05, 0.1, 0.15};
  } else if (name == "symmetric-log-decay") {
    headline_grid();
    c.data.epsilon = 0.1;
    c.data.components[0] = {1.0, 10.0, 0.0, 0.0, 0.0};
    c.data.components[1] = c.data.components[0];
    c.data.symmetric = true;
    c.analysis.log_decay = true;
  } else if (name == "short-range-contrast") {
    c.solver.n_points = 1024;
    c.solver.length = 2048.0;
    c.solver.t_end = 1e3;
    c.solver.scheme = Scheme::rk4_reference;
    c.solver.coupling = Coupling::conservative;
    c.checkpoints.log_count = 40;
    c.checkpoints.dyadic = true;
    c.checkpoints.decades = true;
    c.data.epsilon = 0.1;
    c.data.components[0] = {0.6, 7.0, 0.0, 0.0, 0.0};
    c.data.components[1] = {0.3, 10.0, 0.0, 0.0, 0.0};
    c.analysis.contrast = true;
  } else if (name == "scatter-roundtrip" || name == "obstruction") {
    c.solver.n_points = 1024;
    c.solver.length = 1024.0;
    c.solver.t_end = 50.0;
    c.data.components[0] = {0.05, 5.0, 0.0, 0.0, 0.0};
    c.data.components[1] = {0.05, 5.0, 0.0, 0.0, 0.0};
    c.analysis.profile = false;
    ScatterSpec s;
    if (name == "scatter-roundtrip") {
      s.support.component1 = {{SpectralWindow::Shape::bump, -0.35, 0.25, 0.05, 0.0}};
      s.support.component2 = {{SpectralWindow::Shape::bump, 0.35, 0.25, 0.05, 0.0}};
    } else {
      s.n_points = 8192;
      s.length = 16384.0;
      s.support.component1 = {{SpectralWindow::Shape::bump, 0.0, 0.3, 0.05, 0.0}};
      s.support.component2 = s.support.component1;
      s.obstruction = true;
      SupportSpec ctl;
      ctl.component1 = {{SpectralWindow::Shape::bump, -0.35, 0.25, 0.05, 0.0}};
      ctl.component2 = {{SpectralWindow::Shape::bump, 0.35, 0.25, 0.05, 0.0}};
      s.control = ctl;
    }
    c.scatter = s;
  } else if (name == "quick") {
    c.solver.n_points = 512;
    c.solver.length = 256.0;
    c.solver.t_end = 20.0;
    c.checkpoints.log_count = 12;
    c.data.epsilon = 0.1;
    c.data.components[0] = {1.0, 2.0, -2.0, 0.0, 0.0};
    c.data.components[1] = {0.7, 3.0, 2.0, 0.0, 0.0};
    c.analysis.handoffs = {10.0};
    c.sweep_epsilon = {0.05, 0.1, 0.2, 0.4};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  const SolverConfig& s = c.solver;
  json j;
  j["preset"] = c.preset;
  j["solver"] = {
      {"n_points", s.n_points},
      {"length", s.length},
      {"t_start", s.t_start},
      {"t_end", s.t_end},
      {"dt_policy",
       {{"kind", s.dt_policy.kind == DtPolicy::Kind::fixed ? "fixed" : "proportional"},
        {"dt", s.dt_policy.dt},
        {"switch_time", s.dt_policy.switch_time},
        {"rel", s.dt_policy.rel},
        {"cap", s.dt_policy.cap}}},
      {"checkpoint_times", s.checkpoint_times},
      {"scheme", to_string(s.scheme)},
      {"coupling", to_string(s.coupling)},
      {"guard_fraction", s.guard_fraction},
      {"guard_enabled", s.guard_enabled}};
  j["checkpoints"] = {{"log_count", c.checkpoints.log_count},
                      {"dyadic", c.checkpoints.dyadic},
                      {"decades", c.checkpoints.decades},
                      {"extra", c.checkpoints.extra}};
  json comps = json::array();
  for (const auto& p : c.data.components)
    comps.push_back({{"amplitude", p.amplitude},
                     {"width", p.width},
                     {"center", p.center},
                     {"k0", p.k0},
                     {"chirp", p.chirp}});
  j["data"] = {{"kind", kind_name(c.data.kind)}, {"components", comps},
               {"epsilon", c.data.epsilon},      {"symmetric", c.data.symmetric},
               {"band", c.data.band}};
  j["data"]["mass_ratio"] = c.data.mass_ratio ? json(*c.data.mass_ratio) : json(nullptr);
  j["data"]["seed"] = c.data.seed ? json(*c.data.seed) : json(nullptr);
  j["analysis"] = {{"profile", c.analysis.profile},
                   {"remainder", c.analysis.remainder},
                   {"gamma", c.analysis.gamma},
                   {"handoffs", c.analysis.handoffs},
                   {"shadowing_frequencies", c.analysis.shadowing_frequencies},
                   {"log_decay", c.analysis.log_decay},
                   {"contrast", c.analysis.contrast}};
  j["analysis"]["deadband"] = c.analysis.deadband ? json(*c.analysis.deadband) : json(nullptr);
  if (c.scatter) {
    const ScatterSpec& sc = *c.scatter;
    j["scatter"] = {{"support", support_json(sc.support)},
                    {"n_points", sc.n_points},
                    {"length", sc.length},
                    {"T", sc.T},
                    {"T_max_factor", sc.T_max_factor},
                    {"time_samples", sc.time_samples},
                    {"max_iters", sc.max_iters},
                    {"tol", sc.tol},
                    {"forward_factor", sc.forward_factor},
                    {"forward_checkpoints", sc.forward_checkpoints},
                    {"obstruction", sc.obstruction},
                    {"T0", sc.T0},
                    {"T_end", sc.T_end}};
    j["scatter"]["control"] = sc.control ? support_json(*sc.control) : json(nullptr);
  } else {
    j["scatter"] = nullptr;
  }
  j["sweep_epsilon"] = c.sweep_epsilon;
  j["out_dir"] = c.out_dir;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Obj top(root, "config");
  ExperimentConfig c;
  // a preset key seeds the defaults; the remaining keys override them
  if (top.has("preset")) {
    std::string name;
    top.get("preset", name);
    if (name != "custom") c = preset(name);
    c.preset = name;
  }
  if (top.has("solver")) {
    Obj o(top.sub("solver"), "config.solver");
    SolverConfig& s = c.solver;
    o.get("n_points", s.n_points);
    o.get("length", s.length);
    o.get("t_start", s.t_start);
    o.get("t_end", s.t_end);
    if (o.has("dt_policy")) {
      Obj d(o.sub("dt_policy"), "config.solver.dt_policy");
      std::string kind = s.dt_policy.kind == DtPolicy::Kind::fixed ? "fixed" : "proportional";
      d.get("kind", kind);
      s.dt_policy.kind = parse_enum<DtPolicy::Kind>(
          kind, {{"fixed", DtPolicy::Kind::fixed}, {"proportional", DtPolicy::Kind::proportional}},
          "config.solver.dt_policy.kind");
      d.get("dt", s.dt_policy.dt);
      d.get("switch_time", s.dt_policy.switch_time);
      d.get("rel", s.dt_policy.rel);
      d.get("cap", s.dt_policy.cap);
      d.finish();
    }
    o.get("checkpoint_times", s.checkpoint_times);
    std::string scheme = to_string(s.scheme), coupling = to_string(s.coupling);
    o.get("scheme", scheme);
    o.get("coupling", coupling);
    s.scheme = parse_enum<Scheme>(
        scheme, {{"strang_exact", Scheme::strang_exact}, {"rk4_reference", Scheme::rk4_reference}},
        "config.solver.scheme");
    s.coupling = parse_enum<Coupling>(
        coupling, {{"dissipative", Coupling::dissipative}, {"conservative", Coupling::conservative}},
        "config.solver.coupling");
    o.get("guard_fraction", s.guard_fraction);
    o.get("guard_enabled", s.guard_enabled);
    o.finish();
  }
  if (top.has("checkpoints")) {
    Obj o(top.sub("checkpoints"), "config.checkpoints");
    o.get("log_count", c.checkpoints.log_count);
    o.get("dyadic", c.checkpoints.dyadic);
    o.get("decades", c.checkpoints.decades);
    o.get("extra", c.checkpoints.extra);
    o.finish();
  }
  if (top.has("data")) {
    Obj o(top.sub("data"), "config.data");
    std::string kind = kind_name(c.data.kind);
    o.get("kind", kind);
    c.data.kind = parse_enum<DataSpec::Kind>(kind,
                                             {{"gaussian", DataSpec::Kind::gaussian},
                                              {"modulated", DataSpec::Kind::modulated},
                                              {"modulated-gaussian", DataSpec::Kind::modulated},
                                              {"random-bandlimited", DataSpec::Kind::random_bandlimited}},
                                             "config.data.kind");
    if (o.has("components")) {
      const json& a = o.sub("components");
      if (!a.is_array() || a.size() != 2)
        throw ConfigError("config.data.components: expected an array of two objects");
      for (std::size_t i = 0; i < 2; ++i) {
        Obj p(a[i], "config.data.components[" + std::to_string(i) + "]");
        ComponentSpec& cs = c.data.components[i];
        p.get("amplitude", cs.amplitude);
        p.get("width", cs.width);
        p.get("center", cs.center);
        p.get("k0", cs.k0);
        p.get("chirp", cs.chirp);
        p.finish();
      }
    }
    o.get("epsilon", c.data.epsilon);
    o.get("symmetric", c.data.symmetric);
    o.get("mass_ratio", c.data.mass_ratio);
    o.get("seed", c.data.seed);
    o.get("band", c.data.band);
    o.finish();
  }
  if (top.has("analysis")) {
    Obj o(top.sub("analysis"), "config.analysis");
    o.get("profile", c.analysis.profile);
    o.get("remainder", c.analysis.remainder);
    o.get("gamma", c.analysis.gamma);
    o.get("deadband", c.analysis.deadband);
    o.get("handoffs", c.analysis.handoffs);
    o.get("shadowing_frequencies", c.analysis.shadowing_frequencies);
    o.get("log_decay", c.analysis.log_decay);
    o.get("contrast", c.analysis.contrast);
    o.finish();
  }
  if (top.has("scatter")) {
    const json& sj = top.sub("scatter");
    if (sj.is_null()) {
      c.scatter.reset();
    } else {
      Obj o(sj, "config.scatter");
      ScatterSpec s = c.scatter.value_or(ScatterSpec{});
      if (o.has("support")) s.support = parse_support(o.sub("support"), "config.scatter.support");
      o.get("n_points", s.n_points);
      o.get("length", s.length);
      o.get("T", s.T);
      o.get("T_max_factor", s.T_max_factor);
      o.get("time_samples", s.time_samples);
      o.get("max_iters", s.max_iters);
      o.get("tol", s.tol);
      o.get("forward_factor", s.forward_factor);
      o.get("forward_checkpoints", s.forward_checkpoints);
      o.get("obstruction", s.obstruction);
      o.get("T0", s.T0);
      o.get("T_end", s.T_end);
      if (o.has("control")) {
        const json& cj = o.sub("control");
        if (cj.is_null())
          s.control.reset();
        else
          s.control = parse_support(cj, "config.scatter.control");
      }
      o.finish();
      c.scatter = s;
    }
  }
  top.get("sweep_epsilon", c.sweep_epsilon);
  top.get("out_dir", c.out_dir);
  top.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return fnv1a(config_to_json(config));
}

FieldPair generate_initial_data(const DataSpec& spec, const Grid& grid) {
  if (spec.kind == DataSpec::Kind::random_bandlimited && !spec.seed)
    throw ConfigError("data: random-bandlimited data requires a seed");
  auto component = [&](std::size_t idx) {
    const ComponentSpec& p = spec.components[idx];
    ComplexField f = ComplexField::zeros(grid);
    if (spec.kind == DataSpec::Kind::random_bandlimited) {
      // per-component stream offset by the index
      std::mt19937_64 rng(*spec.seed + 0x9E3779B97F4A7C15ULL * idx);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      Spectrum s = Spectrum::zeros(grid);
      for (std::size_t j = 1; j < grid.size(); ++j) {
        const double a = u(rng), b = u(rng);
        if (std::abs(grid.xi(j)) <= spec.band) s.values[j] = cplx(a, b);
      }
      f = inverse_transform(s);
      for (std::size_t n = 0; n < grid.size(); ++n) {
        const double y = (grid.x(n) - p.center) / p.width;
        f.values[n] *= std::exp(-0.5 * y * y);
      }
      const double peak = linf_norm(f);
      const double scale = peak > 0.0 ? spec.epsilon * p.amplitude / peak : 0.0;
      for (auto& z : f.values) z *= scale;
    } else {
      const bool mod = spec.kind == DataSpec::Kind::modulated;
      for (std::size_t n = 0; n < grid.size(); ++n) {
        const double x = grid.x(n);
        const double y = (x - p.center) / p.width;
        const double phase = mod ? p.k0 * x + 0.5 * p.chirp * x * x : 0.0;
        f.values[n] = std::polar(spec.epsilon * p.amplitude * std::exp(-0.5 * y * y), phase);
      }
    }
    return f;
  };
  ComplexField u1 = component(0);
  ComplexField u2 = spec.symmetric ? u1 : component(1);
  if (spec.mass_ratio) {
    const double m1 = l2_norm(u1), m2 = l2_norm(u2);
    if (!(m2 > 0.0)) throw ConfigError("data: mass_ratio needs a nonzero second component");
    const double scale = m1 / (m2 * std::sqrt(*spec.mass_ratio));
    for (auto& z : u2.values) z *= scale;
  }
  return FieldPair(std::move(u1), std::move(u2));
}

InitialDataReport initial_data_report(const FieldPair& data) {
  InitialDataReport r;
  const NormReport a = norms(data.u1), b = norms(data.u2);
  r.mass1 = a.l2 * a.l2;
  r.mass2 = b.l2 * b.l2;
  r.h2_1 = a.h2;
  r.h2_2 = b.h2;
  r.h11_1 = a.h11;
  r.h11_2 = b.h11;
  return r;
}

double required_length(const FieldPair& data, double t_final) {
  const double xi = std::max(spectral_extent(data.u1), spectral_extent(data.u2));
  return 2.0 * xi * t_final;
}

}  // namespace dnls::harness
