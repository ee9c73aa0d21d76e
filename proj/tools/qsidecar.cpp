// qsidecar: runs the sidecar simulation experiments and writes their CSVs.
//
//   qsidecar <stateful|abstract|qaoa|shots|latency|routing|all> [options]
//
// Exit codes: 0 success, 1 invalid configuration or failed invariant check,
// 2 I/O failure. Any CSV written by a failing invocation is removed.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsidecar/experiments.hpp"

namespace {

using qsidecar::ExperimentOutput;
using qsidecar::RunConfig;

struct Experiment {
  std::string name;
  std::string help;
  std::function<ExperimentOutput(const RunConfig&)> run;
};

std::vector<Experiment> experiments() {
  return {
      {"stateful", "protected-register parity readout (stateful.csv, scaling.csv)", qsidecar::run_stateful},
      {"abstract", "abstract candidate-update search (abstract_update.csv)", qsidecar::run_stateless_abstract},
      {"qaoa", "circuit-level one-layer sampler (qaoa.csv)",
       [](const RunConfig& c) { return qsidecar::run_stateless_qaoa(c); }},
      {"shots", "shot sensitivity of the fixed circuit (shots.csv)",
       [](const RunConfig& c) { return qsidecar::run_shot_sensitivity(c); }},
      {"latency", "reset-time latency and throughput sweep (latency.csv)", qsidecar::run_latency},
      {"routing", "expert routing with a sidecar prior (routing.csv)", qsidecar::run_routing},
  };
}

void remove_all(const std::vector<std::filesystem::path>& files) {
  std::error_code ec;
  for (const auto& f : files) std::filesystem::remove(f, ec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum sidecar simulation experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value config file; command-line flags take precedence");

  RunConfig cfg;
  std::string out_dir = "results";
  if (const char* env = std::getenv("QSIDECAR_OUT"); env && *env) out_dir = env;

  int gamma_points = 25;
  int beta_points = 25;
  bool dump_landscapes = false;

  app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  app.add_option("--out", out_dir, "output directory (env QSIDECAR_OUT)")->capture_default_str();
  app.add_option("--alpha-sq", cfg.ghz.alpha_sq, "|alpha|^2 of the protected state")->capture_default_str();
  app.add_option("--phi", cfg.ghz.phi, "relative phase of the protected state")->capture_default_str();
  app.add_option("--m-list", cfg.m_list, "protected register sizes")->delimiter(',');
  app.add_option("--p-list", cfg.p_list, "depolarizing probabilities")->delimiter(',');
  app.add_option("--rounds", cfg.rounds, "readout rounds")->capture_default_str();
  app.add_option("--trials", cfg.abstract_trials, "abstract search trials")->capture_default_str();
  app.add_option("--n-list", cfg.n_list, "circuit sizes")->delimiter(',');
  app.add_option("--landscapes", cfg.landscapes, "landscapes per circuit size")->capture_default_str();
  app.add_option("--grid-gamma", gamma_points, "gamma grid points over [-pi, 0]")->capture_default_str();
  app.add_option("--grid-beta", beta_points, "beta grid points over [0, pi/2]")->capture_default_str();
  app.add_option("--fixed-gamma", cfg.sampler.qaoa_fixed.gamma, "fixed-circuit gamma")->capture_default_str();
  app.add_option("--fixed-beta", cfg.sampler.qaoa_fixed.beta, "fixed-circuit beta")->capture_default_str();
  app.add_option("--tau", cfg.sampler.softmax_temperature, "softmax temperature")->capture_default_str();
  app.add_option("--sigma", cfg.sampler.softmax_noise_sigma, "softmax utility noise")->capture_default_str();
  app.add_option("--kappa", cfg.sampler.sidecar_sharpness, "sidecar sharpness")->capture_default_str();
  app.add_option("--sidecar-sigma", cfg.sampler.sidecar_noise_sigma, "sidecar utility noise")
      ->capture_default_str();
  app.add_option("--shot-grid", cfg.shot_grid, "shots per query")->delimiter(',');
  app.add_option("--shot-queries", cfg.shot_queries, "sampled queries per shot count")->capture_default_str();
  app.add_option("--reset-grid", cfg.reset_grid, "reset times in ns, within [20, 1200]")->delimiter(',');
  app.add_option("--routing-trials", cfg.routing_trials, "trials per routing cell")->capture_default_str();
  app.add_option("--routing-sigma", cfg.routing_noise_sigma, "noisy router score noise")->capture_default_str();
  app.add_option("--reliabilities", cfg.reliabilities, "prior reliabilities")->delimiter(',');
  app.add_flag("--dump-landscapes", dump_landscapes, "also write the circuit-experiment landscapes as text");

  const auto all = experiments();
  std::vector<CLI::App*> subs;
  for (const auto& e : all) subs.push_back(app.add_subcommand(e.name, e.help));
  auto* run_all = app.add_subcommand("all", "run every experiment under one master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.output_dir = out_dir;
  cfg.sampler.grid_gamma = qsidecar::linspace(-std::numbers::pi, 0.0, gamma_points);
  cfg.sampler.grid_beta = qsidecar::linspace(0.0, std::numbers::pi / 2, beta_points);

  std::vector<const Experiment*> selected;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (run_all->parsed() || subs[i]->parsed()) selected.push_back(&all[i]);

  std::vector<std::filesystem::path> written;
  try {
    cfg.validate();
    std::vector<std::string> failures;
    for (const auto* e : selected) {
      const auto result = e->run(cfg);
      std::cout << result.summary << "\n";
      const auto files = qsidecar::write_outputs(result, cfg.output_dir);
      written.insert(written.end(), files.begin(), files.end());
      failures.insert(failures.end(), result.failed_checks.begin(), result.failed_checks.end());
      if (!failures.empty()) break;
    }
    if (dump_landscapes && failures.empty() && (run_all->parsed() || app.got_subcommand("qaoa"))) {
      std::filesystem::create_directories(cfg.output_dir);
      const auto path = cfg.output_dir / "qaoa_landscapes.txt";
      std::ofstream f(path);
      for (int n : cfg.n_list)
        for (int l = 0; l < cfg.landscapes; ++l)
          f << "[landscape n=" << n << " id=" << l << "]\n"
            << qsidecar::to_text(qsidecar::experiment_landscape(cfg, n, l)) << "\n";
      if (!f) throw qsidecar::IoError("cannot write " + path.string());
      written.push_back(path);
    }
    if (!failures.empty()) {
      for (const auto& f : failures) std::cerr << "check failed: " << f << "\n";
      remove_all(written);
      return 1;
    }
  } catch (const qsidecar::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    remove_all(written);
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    remove_all(written);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    remove_all(written);
    return 1;
  }
  for (const auto& f : written) std::cout << "wrote " << f.string() << "\n";
  return 0;
}
