#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "dnls/asymptotics.hpp"
#include "dnls/dynamics.hpp"
#include "dnls/errors.hpp"
#include "dnls/harness/config.hpp"
#include "dnls/harness/io.hpp"
#include "dnls/harness/pipeline.hpp"
#include "dnls/profile.hpp"
#include "dnls/spectral.hpp"

namespace py = pybind11;
using namespace dnls;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

std::vector<cplx> to_vec(const CArray& a) {
  if (a.ndim() != 1) throw InputError("expected a one-dimensional complex array");
  return std::vector<cplx>(a.data(), a.data() + a.size());
}

CArray to_array(const std::vector<cplx>& v) {
  CArray out(static_cast<py::ssize_t>(v.size()));
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(cplx));
  return out;
}

Grid grid_for(const CArray& a, double length) { return make_grid(static_cast<std::size_t>(a.size()), length); }

FieldPair make_pair(const CArray& u1, const CArray& u2, double length, double t) {
  if (u1.size() != u2.size()) throw InputError("u1 and u2 differ in length");
  const Grid g = grid_for(u1, length);
  return FieldPair(ComplexField(g, to_vec(u1), t), ComplexField(g, to_vec(u2), t));
}

py::dict ledger_dict(const MassLedger& l) {
  py::dict d;
  d["t"] = l.t;
  d["mass1"] = l.mass1;
  d["mass2"] = l.mass2;
  d["diff"] = l.diff;
  d["interaction"] = l.interaction;
  d["total"] = l.total();
  return d;
}

py::object parse_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

harness::RunOptions run_options(std::optional<std::string> out, std::optional<std::uint64_t> seed,
                                std::size_t threads, bool deterministic) {
  harness::RunOptions o;
  o.out_dir = std::move(out);
  o.seed = seed;
  o.threads = threads;
  o.deterministic = deterministic;
  return o;
}

py::dict result_dict(const harness::PipelineResult& r) {
  py::dict d;
  d["exit_code"] = r.exit_code;
  d["error_kind"] = r.error_kind;
  d["message"] = r.message;
  d["out_dir"] = r.out_dir;
  d["summary"] = parse_json(r.summary_json);
  return d;
}

harness::ExperimentConfig resolve_config(const std::optional<std::string>& preset,
                                         const std::optional<std::string>& config_json) {
  if (preset && config_json) throw ConfigError("give either preset or config_json, not both");
  if (config_json) return harness::config_from_json(*config_json);
  if (preset) return harness::preset(*preset);
  throw ConfigError("one of preset or config_json is required");
}

}  // namespace

PYBIND11_MODULE(_dnls, m) {
  m.doc() = "Spectral simulator for the dissipative two-component cubic NLS";
  m.attr("__version__") = DNLS_VERSION;

  auto base = py::register_exception<Error>(m, "DnlsError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<GuardViolation>(m, "GuardViolation", base);
  py::register_exception<FormatError>(m, "FormatError", base);
  py::register_exception<DivergenceError>(m, "DivergenceError", base);

  m.def("grid_nodes", [](std::size_t n, double length) {
    const Grid g = make_grid(n, length);
    return py::make_tuple(py::array(py::cast(g.x_nodes())), py::array(py::cast(g.xi_nodes())));
  }, py::arg("n_points"), py::arg("length"), "(x, xi) nodes of the periodic grid");

  m.def("forward_transform", [](const CArray& u, double length) {
    return to_array(forward_transform(ComplexField(grid_for(u, length), to_vec(u))).values);
  }, py::arg("u"), py::arg("length"), "unitary Fourier transform onto ascending xi nodes");

  m.def("inverse_transform", [](const CArray& s, double length) {
    return to_array(inverse_transform(Spectrum(grid_for(s, length), to_vec(s))).values);
  }, py::arg("spectrum"), py::arg("length"));

  m.def("free_propagate", [](const CArray& u, double length, double dt) {
    return to_array(free_propagate(ComplexField(grid_for(u, length), to_vec(u)), dt).values);
  }, py::arg("u"), py::arg("length"), py::arg("dt"), "exact free flow U(dt)");

  m.def("mass_ledger", [](const CArray& u1, const CArray& u2, double length) {
    return ledger_dict(mass_ledger(make_pair(u1, u2, length, 0.0)));
  }, py::arg("u1"), py::arg("u2"), py::arg("length"));

  m.def("run", [](const CArray& u1, const CArray& u2, double length, double t_end, double t_start,
                  std::vector<double> checkpoints, const std::string& scheme, const std::string& coupling) {
    SolverConfig cfg;
    cfg.n_points = static_cast<std::size_t>(u1.size());
    cfg.length = length;
    cfg.t_start = t_start;
    cfg.t_end = t_end;
    cfg.checkpoint_times = std::move(checkpoints);
    if (scheme == "strang_exact") cfg.scheme = Scheme::strang_exact;
    else if (scheme == "rk4_reference") cfg.scheme = Scheme::rk4_reference;
    else throw ConfigError("unknown scheme '" + scheme + "'");
    if (coupling == "dissipative") cfg.coupling = Coupling::dissipative;
    else if (coupling == "conservative") cfg.coupling = Coupling::conservative;
    else throw ConfigError("unknown coupling '" + coupling + "'");
    Trajectory tr;
    {
      const FieldPair data = make_pair(u1, u2, length, t_start);
      py::gil_scoped_release release;
      tr = run(cfg, data);
    }
    py::list out;
    for (const auto& c : tr.checkpoints) {
      py::dict d;
      d["t"] = c.state.time();
      d["u1"] = to_array(c.state.u1.values);
      d["u2"] = to_array(c.state.u2.values);
      d["ledger"] = ledger_dict(c.ledger);
      out.append(d);
    }
    return out;
  }, py::arg("u1"), py::arg("u2"), py::arg("length"), py::arg("t_end"), py::arg("t_start") = 0.0,
     py::arg("checkpoints") = std::vector<double>{}, py::arg("scheme") = "strang_exact",
     py::arg("coupling") = "dissipative", "integrate and return the checkpoints");

  m.def("extract_profiles", [](const CArray& u1, const CArray& u2, double length, double t) {
    const ProfileSnapshot s = extract_profiles(make_pair(u1, u2, length, t));
    return py::make_tuple(to_array(s.alpha1.values), to_array(s.alpha2.values));
  }, py::arg("u1"), py::arg("u2"), py::arg("length"), py::arg("t"), "profiles F U(-t) u_j");

  m.def("reduced_flow", [](cplx a1, cplx a2, double t0, double t) {
    const ReducedState r = reduced_flow(ReducedState{t0, a1, a2}, t);
    return py::make_tuple(r.a1, r.a2);
  }, py::arg("a1"), py::arg("a2"), py::arg("t0"), py::arg("t"));

  m.def("lemma_certificates", [] {
    std::vector<SweepEntry> ms;
    std::vector<LinearSweepEntry> ls;
    {
      py::gil_scoped_release release;
      ms = lemma_m_sweep();
      ls = linear_ode_sweep();
    }
    py::list lm, lo;
    for (const auto& e : ms) {
      py::dict d;
      d["p"] = e.params.p;
      d["q"] = e.params.q;
      d["C0"] = e.params.C0;
      d["C1"] = e.params.C1;
      d["pass"] = e.certificate.pass;
      d["worst_margin"] = e.certificate.worst_margin;
      lm.append(d);
    }
    for (const auto& e : ls) {
      py::dict d;
      d["name"] = e.name;
      d["y_plus"] = e.limit.y_plus;
      d["pass"] = e.limit.certificate.pass;
      if (e.has_expected) d["expected"] = e.expected;
      lo.append(d);
    }
    return py::make_tuple(lm, lo);
  }, "(lemma_m entries, linear_ode entries)");

  m.def("write_checkpoint", [](const std::string& path, const CArray& u1, const CArray& u2, double length, double t) {
    harness::write_checkpoint(make_pair(u1, u2, length, t), path);
  }, py::arg("path"), py::arg("u1"), py::arg("u2"), py::arg("length"), py::arg("t"));

  m.def("read_checkpoint", [](const std::string& path) {
    const FieldPair p = harness::read_checkpoint(path);
    py::dict d;
    d["t"] = p.time();
    d["length"] = p.grid().length();
    d["u1"] = to_array(p.u1.values);
    d["u2"] = to_array(p.u2.values);
    return d;
  }, py::arg("path"));

  m.def("preset_names", &harness::preset_names);
  m.def("preset_config", [](const std::string& name) { return parse_json(harness::config_to_json(harness::preset(name))); },
        py::arg("name"), "preset configuration as a dict");

  auto pipeline = [](auto fn) {
    return [fn](std::optional<std::string> preset, std::optional<std::string> config_json,
                      std::optional<std::string> out, std::optional<std::uint64_t> seed, std::size_t threads,
                      bool deterministic) {
      const harness::ExperimentConfig cfg = resolve_config(preset, config_json);
      const harness::RunOptions o = run_options(std::move(out), seed, threads, deterministic);
      harness::PipelineResult r;
      {
        py::gil_scoped_release release;
        r = fn(cfg, o);
      }
      return result_dict(r);
    };
  };
  const auto pipeline_args = [] {
    return std::make_tuple(py::arg("preset") = py::none(), py::arg("config_json") = py::none(),
                           py::arg("out") = py::none(), py::arg("seed") = py::none(), py::arg("threads") = 1,
                           py::arg("deterministic") = false);
  };
  std::apply([&](auto... a) { m.def("simulate", pipeline(&harness::simulate), a...); }, pipeline_args());
  std::apply([&](auto... a) { m.def("scatter", pipeline(&harness::scatter), a...); }, pipeline_args());
  std::apply([&](auto... a) { m.def("sweep", pipeline(&harness::sweep), a...); }, pipeline_args());

  m.def("analyze", [](const std::string& run_dir, std::optional<std::string> out) {
    harness::PipelineResult r;
    {
      py::gil_scoped_release release;
      r = harness::analyze_directory(run_dir, run_options(std::move(out), std::nullopt, 1, true));
    }
    return result_dict(r);
  }, py::arg("run_dir"), py::arg("out") = py::none());

  m.def("lemmas", [](const std::string& sweep, std::optional<std::string> out) {
    harness::PipelineResult r;
    {
      py::gil_scoped_release release;
      r = harness::lemmas(sweep, run_options(std::move(out), std::nullopt, 1, true));
    }
    return result_dict(r);
  }, py::arg("sweep") = "default", py::arg("out") = py::none());
}
