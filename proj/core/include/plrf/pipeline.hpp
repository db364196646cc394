#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace plrf {

// One sweep over a d-ladder at fixed (alpha, beta): the unit of work behind
// the simulate/volterra subcommands. Mirrors the key=value config file;
// command-line flags override file values.
struct SweepConfig {
  double alpha = 0.5;
  double beta = 0.5;
  std::vector<int64_t> d_list{200, 400};
  double v_multiple = 4.0;     // v = round(v_multiple * d) unless v_fixed
  int64_t v_fixed = 0;         // > 0 pins v for every d
  int seeds = 8;               // replicates per d
  uint64_t base_seed = 1;
  std::string gamma_rule = "auto";  // "auto" (half threshold) or "fixed"
  double gamma = 0.0;               // used when gamma_rule == "fixed"
  double safety = 0.5;
  int64_t batch = 1;
  int64_t horizon = 0;          // 0: derive from flops_budget
  double flops_budget = 0.0;    // horizon_d = ceil(flops_budget / (B d))
  std::string schedule_kind = "geometric";
  double schedule_ratio = 1.1;
  int64_t schedule_first = 1;
  int64_t schedule_step = 1;
  std::string sampler = "auto";  // direct | eigen | chol | auto
  std::string out_dir = "out";
  double window_fmin = 1e6;  // frontier defaults
  double window_fmax = 1e8;
  int slices = 15;
  int workers = 0;  // 0: pick from hardware
  bool naive = false;  // volterra: use the O(T^2) reference solver

  void validate() const;
};

SweepConfig parse_config_file(const std::string& path);
SweepConfig parse_config_text(const std::string& text);

// Applies "key=value" overrides (same keys as the config file).
void apply_override(SweepConfig& config, const std::string& key, const std::string& value);

// FNV-1a over the canonical config dump; stamped into every output file.
std::string manifest_hash(const std::string& canonical);

struct RunResult {
  std::vector<std::string> files;
  std::string manifest_path;
};

// simulate: SGD curves for each (d, seed), CSV per run plus manifest.json.
RunResult cmd_simulate(const SweepConfig& config);

// volterra: expected-loss curves from the empirical spectrum, per (d, seed).
RunResult cmd_volterra(const SweepConfig& config);

// theory: CSV r,F0,Fpp,Fac,Kpp,surrogate,argmax on a log-spaced r grid.
RunResult cmd_theory(const SweepConfig& config);

// spectrum: CSV u,eta,trace_density,target_density on the density grid.
RunResult cmd_spectrum(const SweepConfig& config);

// phase: JSON {alpha, beta, phase, eta, xi, tradeoff}.
std::string cmd_phase_json(double alpha, double beta);

struct FrontierArgs {
  std::vector<std::string> inputs;  // files or globs
  double fmin = 1e6;
  double fmax = 1e8;
  int slices = 15;
  std::string approach = "all";  // 0 | 1 | 2 | all
  std::string out_path;          // empty: stdout only
};

std::string cmd_frontier_json(const FrontierArgs& args);

// sweep: simulate + volterra + frontier in one pass; returns the report.
std::string cmd_sweep(const SweepConfig& config);

// Re-run any command from a previously written manifest (reproducibility).
SweepConfig config_from_manifest(const std::string& manifest_path);

}  // namespace plrf
