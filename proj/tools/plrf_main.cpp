// plrf: a numerical laboratory for one-pass SGD on power-law random
// features — simulation, exact expected-loss dynamics, closed-form theory,
// and compute-optimal exponent measurement.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "plrf/errors.hpp"
#include "plrf/pipeline.hpp"

namespace {

// Config file first, then explicit key=value overrides, mirroring the file.
plrf::SweepConfig load_config(const std::string& config_path,
                              const std::string& manifest_path,
                              const std::vector<std::string>& overrides) {
  plrf::SweepConfig config;
  if (!manifest_path.empty()) {
    config = plrf::config_from_manifest(manifest_path);
  } else if (!config_path.empty()) {
    config = plrf::parse_config_file(config_path);
  }
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw plrf::config_error("override must be key=value: " + kv);
    plrf::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config;
}

void add_config_options(CLI::App* cmd, std::string& config_path, std::string& manifest_path,
                        std::vector<std::string>& overrides) {
  cmd->add_option("-c,--config", config_path, "key = value config file");
  cmd->add_option("--from-manifest", manifest_path,
                  "re-run the configuration embedded in a manifest.json");
  cmd->add_option("-s,--set", overrides, "override, e.g. --set d_list=200,400")
      ->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power-law random features laboratory"};
  app.require_subcommand(1);

  std::string config_path, manifest_path;
  std::vector<std::string> overrides;

  auto* simulate = app.add_subcommand("simulate", "run one-pass SGD over the d ladder");
  add_config_options(simulate, config_path, manifest_path, overrides);

  auto* volterra = app.add_subcommand("volterra", "solve the expected-loss recursion per d");
  add_config_options(volterra, config_path, manifest_path, overrides);
  bool naive = false;
  volterra->add_flag("--naive", naive, "use the O(T^2) reference convolution");

  auto* theory = app.add_subcommand("theory", "closed-form component curves");
  add_config_options(theory, config_path, manifest_path, overrides);

  auto* spectrum = app.add_subcommand("spectrum", "deterministic-equivalent densities");
  add_config_options(spectrum, config_path, manifest_path, overrides);

  auto* phase = app.add_subcommand("phase", "classify (alpha, beta) and print exponents");
  double phase_alpha = 0.0, phase_beta = 0.0;
  phase->add_option("alpha", phase_alpha, "data complexity")->required();
  phase->add_option("beta", phase_beta, "target complexity")->required();

  auto* frontier = app.add_subcommand("frontier", "measure compute-optimal exponents");
  plrf::FrontierArgs fargs;
  std::string window_arg;
  frontier->add_option("inputs", fargs.inputs, "curve CSV files or globs")->required();
  frontier->add_option("--window", window_arg, "fmin,fmax (default 1e6,1e8)");
  frontier->add_option("--slices", fargs.slices, "number of IsoFLOP slices");
  frontier->add_option("--approach", fargs.approach, "0 | 1 | 2 | all")
      ->check(CLI::IsMember({"0", "1", "2", "all"}));
  frontier->add_option("--out", fargs.out_path, "write the JSON report here");

  auto* sweep = app.add_subcommand("sweep", "simulate + volterra + frontier in one pass");
  add_config_options(sweep, config_path, manifest_path, overrides);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto result = plrf::cmd_simulate(load_config(config_path, manifest_path, overrides));
      std::printf("wrote %zu curves, manifest %s\n", result.files.size(),
                  result.manifest_path.c_str());
    } else if (volterra->parsed()) {
      auto config = load_config(config_path, manifest_path, overrides);
      if (naive) config.naive = true;
      const auto result = plrf::cmd_volterra(config);
      std::printf("wrote %zu curves, manifest %s\n", result.files.size(),
                  result.manifest_path.c_str());
    } else if (theory->parsed()) {
      const auto result = plrf::cmd_theory(load_config(config_path, manifest_path, overrides));
      std::printf("wrote %s\n", result.files.front().c_str());
    } else if (spectrum->parsed()) {
      const auto result = plrf::cmd_spectrum(load_config(config_path, manifest_path, overrides));
      std::printf("wrote %s\n", result.files.front().c_str());
    } else if (phase->parsed()) {
      std::printf("%s\n", plrf::cmd_phase_json(phase_alpha, phase_beta).c_str());
    } else if (frontier->parsed()) {
      if (!window_arg.empty()) {
        const auto comma = window_arg.find(',');
        if (comma == std::string::npos) {
          throw plrf::config_error("--window expects fmin,fmax");
        }
        fargs.fmin = std::stod(window_arg.substr(0, comma));
        fargs.fmax = std::stod(window_arg.substr(comma + 1));
      }
      std::printf("%s\n", plrf::cmd_frontier_json(fargs).c_str());
    } else if (sweep->parsed()) {
      std::printf("%s\n",
                  plrf::cmd_sweep(load_config(config_path, manifest_path, overrides)).c_str());
    }
  } catch (const plrf::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const plrf::numeric_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
