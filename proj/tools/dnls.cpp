#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dnls/errors.hpp"
#include "dnls/harness/config.hpp"
#include "dnls/harness/pipeline.hpp"

namespace {

using namespace dnls::harness;

int report(const std::string& kind, const std::string& message, int code) {
  std::cerr << "dnls:error:" << kind << ": " << message << '\n';
  return code;
}

int exit_code_for(const std::string& kind) {
  if (kind == "config" || kind == "input" || kind == "format" || kind == "domain" || kind == "usage")
    return 2;
  return 1;
}

struct Common {
  std::string preset_name;
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  bool deterministic = false;
  bool no_checkpoints = false;

  void attach(CLI::App* app, bool needs_config) {
    if (needs_config) {
      auto* p = app->add_option("--preset", preset_name, "named experiment preset");
      auto* c = app->add_option("--config", config_path, "JSON configuration file");
      p->excludes(c);
    }
    app->add_option("--out", out, "output directory");
    app->add_option("--seed", seed, "seed for random initial data");
    app->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app->add_flag("--deterministic", deterministic, "single worker thread, bitwise reproducible");
  }

  ExperimentConfig config() const {
    if (!config_path.empty()) return load_config(config_path);
    if (!preset_name.empty()) return preset(preset_name);
    throw dnls::ConfigError("one of --preset or --config is required");
  }

  RunOptions options() const {
    RunOptions o;
    if (!out.empty()) o.out_dir = out;
    o.seed = seed;
    o.threads = threads;
    o.deterministic = deterministic;
    o.write_checkpoints = !no_checkpoints;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dnls: spectral simulator for the dissipative two-component cubic NLS"};
  app.set_version_flag("--version", std::string(DNLS_VERSION));
  app.require_subcommand(1);
  bool list = false;
  app.add_flag("--list-presets", list, "print the preset names and exit");

  Common sim, ana, sca, lem, swp;
  auto* simulate_cmd = app.add_subcommand("simulate", "run a preset or configuration");
  sim.attach(simulate_cmd, true);
  simulate_cmd->add_flag("--no-checkpoints", sim.no_checkpoints, "skip binary checkpoints");

  std::string run_dir;
  auto* analyze_cmd = app.add_subcommand("analyze", "profile analysis of a simulate output directory");
  ana.attach(analyze_cmd, false);
  analyze_cmd->add_option("run_dir", run_dir, "simulate output directory")->required();

  auto* scatter_cmd = app.add_subcommand("scatter", "final-state construction or obstruction probe");
  sca.attach(scatter_cmd, true);

  std::string lemma_sweep = "default";
  auto* lemmas_cmd = app.add_subcommand("lemmas", "decay lemma certificate sweeps");
  lem.attach(lemmas_cmd, false);
  lemmas_cmd->add_option("--sweep", lemma_sweep, "sweep name");

  auto* sweep_cmd = app.add_subcommand("sweep", "data-scale sweep of a preset");
  swp.attach(sweep_cmd, true);

  if (argc > 1 && std::string(argv[1]) == "--list-presets") {
    for (const auto& n : preset_names()) std::cout << n << '\n';
    return 0;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), 2);
  }

  try {
    PipelineResult r;
    if (simulate_cmd->parsed()) {
      r = simulate(sim.config(), sim.options());
    } else if (analyze_cmd->parsed()) {
      r = analyze_directory(run_dir, ana.options());
    } else if (scatter_cmd->parsed()) {
      r = scatter(sca.config(), sca.options());
    } else if (lemmas_cmd->parsed()) {
      r = lemmas(lemma_sweep, lem.options());
    } else {
      r = sweep(swp.config(), swp.options());
    }
    std::cout << r.summary_json << '\n';
    if (r.exit_code != 0) return report(r.error_kind, r.message + " (see " + r.out_dir + ")", 1);
    return 0;
  } catch (const dnls::Error& e) {
    return report(e.kind(), e.what(), exit_code_for(e.kind()));
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
}
