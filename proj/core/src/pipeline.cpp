#include "plrf/pipeline.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "plrf/csv.hpp"
#include "plrf/errors.hpp"
#include "plrf/frontier.hpp"
#include "plrf/gram.hpp"
#include "plrf/modes.hpp"
#include "plrf/problem.hpp"
#include "plrf/schedule.hpp"
#include "plrf/sgd.hpp"
#include "plrf/spectrum.hpp"
#include "plrf/theory.hpp"
#include "plrf/volterra.hpp"

extern "C" void openblas_set_num_threads(int);

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace plrf {

void SweepConfig::validate() const {
  if (!(alpha > 0.0)) throw config_error("config: alpha must be positive");
  if (d_list.empty()) throw config_error("config: d_list is empty");
  for (size_t i = 1; i < d_list.size(); ++i) {
    if (d_list[i] <= d_list[i - 1]) throw config_error("config: d_list must be increasing");
  }
  if (seeds < 1) throw config_error("config: seeds must be >= 1");
  if (v_fixed == 0 && !(v_multiple > 1.0)) throw config_error("config: v_multiple must exceed 1");
  if (gamma_rule != "auto" && gamma_rule != "fixed") {
    throw config_error("config: gamma_rule must be auto or fixed");
  }
  if (gamma_rule == "fixed" && !(gamma > 0.0)) throw config_error("config: fixed gamma missing");
  if (batch < 1) throw config_error("config: batch must be >= 1");
  if (horizon <= 0 && !(flops_budget > 0.0)) {
    throw config_error("config: set horizon or flops_budget");
  }
  if (sampler != "auto" && sampler != "direct" && sampler != "eigen" && sampler != "chol") {
    throw config_error("config: unknown sampler " + sampler);
  }
  if (schedule_kind != "geometric" && schedule_kind != "linear") {
    throw config_error("config: unknown schedule kind");
  }
}

namespace {

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, delim)) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_override(SweepConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "alpha") c.alpha = std::stod(value);
    else if (key == "beta") c.beta = std::stod(value);
    else if (key == "d_list") {
      c.d_list.clear();
      for (const std::string& tok : split(value, ',')) c.d_list.push_back(std::stoll(trim(tok)));
    } else if (key == "v_multiple") c.v_multiple = std::stod(value);
    else if (key == "v_fixed") c.v_fixed = std::stoll(value);
    else if (key == "seeds") c.seeds = std::stoi(value);
    else if (key == "seed") c.base_seed = std::stoull(value);
    else if (key == "gamma_rule") c.gamma_rule = value;
    else if (key == "gamma") { c.gamma = std::stod(value); c.gamma_rule = "fixed"; }
    else if (key == "safety") c.safety = std::stod(value);
    else if (key == "batch") c.batch = std::stoll(value);
    else if (key == "horizon") c.horizon = std::stoll(value);
    else if (key == "flops_budget") c.flops_budget = std::stod(value);
    else if (key == "schedule_kind") c.schedule_kind = value;
    else if (key == "schedule_ratio") c.schedule_ratio = std::stod(value);
    else if (key == "schedule_first") c.schedule_first = std::stoll(value);
    else if (key == "schedule_step") c.schedule_step = std::stoll(value);
    else if (key == "sampler") c.sampler = value;
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "window_fmin") c.window_fmin = std::stod(value);
    else if (key == "window_fmax") c.window_fmax = std::stod(value);
    else if (key == "slices") c.slices = std::stoi(value);
    else if (key == "workers") c.workers = std::stoi(value);
    else if (key == "naive") c.naive = (value == "1" || value == "true");
    else throw config_error("config: unknown key " + key);
  } catch (const std::invalid_argument&) {
    throw config_error("config: bad value for " + key + ": " + value);
  } catch (const std::out_of_range&) {
    throw config_error("config: value out of range for " + key);
  }
}

SweepConfig parse_config_text(const std::string& text) {
  SweepConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_override(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

json config_to_json(const SweepConfig& c) {
  json j;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["d_list"] = c.d_list;
  j["v_multiple"] = c.v_multiple;
  j["v_fixed"] = c.v_fixed;
  j["seeds"] = c.seeds;
  j["seed"] = c.base_seed;
  j["gamma_rule"] = c.gamma_rule;
  j["gamma"] = c.gamma;
  j["safety"] = c.safety;
  j["batch"] = c.batch;
  j["horizon"] = c.horizon;
  j["flops_budget"] = c.flops_budget;
  j["schedule_kind"] = c.schedule_kind;
  j["schedule_ratio"] = c.schedule_ratio;
  j["schedule_first"] = c.schedule_first;
  j["schedule_step"] = c.schedule_step;
  j["sampler"] = c.sampler;
  j["out_dir"] = c.out_dir;
  j["window_fmin"] = c.window_fmin;
  j["window_fmax"] = c.window_fmax;
  j["slices"] = c.slices;
  j["workers"] = c.workers;
  j["naive"] = c.naive;
  return j;
}

SweepConfig config_from_json(const json& j) {
  SweepConfig c;
  c.alpha = j.at("alpha");
  c.beta = j.at("beta");
  c.d_list = j.at("d_list").get<std::vector<int64_t>>();
  c.v_multiple = j.at("v_multiple");
  c.v_fixed = j.at("v_fixed");
  c.seeds = j.at("seeds");
  c.base_seed = j.at("seed");
  c.gamma_rule = j.at("gamma_rule");
  c.gamma = j.at("gamma");
  c.safety = j.at("safety");
  c.batch = j.at("batch");
  c.horizon = j.at("horizon");
  c.flops_budget = j.at("flops_budget");
  c.schedule_kind = j.at("schedule_kind");
  c.schedule_ratio = j.at("schedule_ratio");
  c.schedule_first = j.at("schedule_first");
  c.schedule_step = j.at("schedule_step");
  c.sampler = j.at("sampler");
  c.out_dir = j.at("out_dir");
  c.window_fmin = j.at("window_fmin");
  c.window_fmax = j.at("window_fmax");
  c.slices = j.at("slices");
  c.workers = j.at("workers");
  c.naive = j.at("naive");
  return c;
}

struct Task {
  int64_t d;
  int replicate;
  int64_t v;
  uint64_t derived_seed;
  int64_t horizon;
  // results
  double gamma = 0.0;
  double lambda_max = 0.0;
  std::string sampler;
  std::string file;
};

int64_t v_for(const SweepConfig& c, int64_t d) {
  const int64_t v = c.v_fixed > 0
                        ? c.v_fixed
                        : static_cast<int64_t>(std::llround(c.v_multiple * static_cast<double>(d)));
  if (v <= d) throw config_error("config: v rule gives v <= d");
  return v;
}

int64_t horizon_for(const SweepConfig& c, int64_t d) {
  if (c.horizon > 0) return c.horizon;
  const int64_t h = static_cast<int64_t>(
      std::ceil(c.flops_budget / (static_cast<double>(c.batch) * static_cast<double>(d))));
  return std::max<int64_t>(h, 1);
}

CheckpointSchedule schedule_for(const SweepConfig& c, int64_t horizon) {
  CheckpointSchedule s;
  s.kind = c.schedule_kind == "linear" ? CheckpointSchedule::Kind::linear
                                       : CheckpointSchedule::Kind::geometric;
  s.first = c.schedule_first;
  s.ratio = c.schedule_ratio;
  s.step = c.schedule_step;
  s.max_iter = horizon;
  return s;
}

std::vector<Task> make_tasks(const SweepConfig& c) {
  std::vector<Task> tasks;
  for (int64_t d : c.d_list) {
    for (int rep = 0; rep < c.seeds; ++rep) {
      Task t;
      t.d = d;
      t.replicate = rep;
      t.v = v_for(c, d);
      t.derived_seed = CounterRng::derive(c.base_seed,
                                          {static_cast<uint64_t>(d),
                                           kTagReplicate, static_cast<uint64_t>(rep)})
                           .key();
      t.horizon = horizon_for(c, d);
      tasks.push_back(t);
    }
  }
  return tasks;
}

std::string resolve_sampler(const SweepConfig& c, int64_t d) {
  if (c.sampler != "auto") return c.sampler;
  return d <= 4096 ? "eigen" : "chol";
}

// Runs tasks with a bounded pool; BLAS threads are split across workers.
void run_pool(const SweepConfig& c, std::vector<Task>& tasks,
              const std::function<void(Task&)>& body) {
  int64_t max_d = 0;
  for (const Task& t : tasks) max_d = std::max(max_d, t.d);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned workers = c.workers > 0 ? static_cast<unsigned>(c.workers)
                                   : (max_d > 2048 ? 1u : std::min<unsigned>(hw, tasks.size()));
  workers = std::max(1u, std::min<unsigned>(workers, tasks.size()));
  openblas_set_num_threads(static_cast<int>(std::max(1u, hw / workers)));

  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        body(tasks[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned w = 1; w < workers; ++w) threads.emplace_back(worker);
  worker();
  for (auto& th : threads) th.join();
  openblas_set_num_threads(static_cast<int>(hw));
  if (error) std::rethrow_exception(error);
}

std::string write_manifest(const SweepConfig& c, const std::string& command,
                           const std::vector<Task>& tasks, const std::string& hash) {
  json m;
  m["command"] = command;
  m["hash"] = hash;
  m["config"] = config_to_json(c);
  m["tasks"] = json::array();
  for (const Task& t : tasks) {
    json tj;
    tj["d"] = t.d;
    tj["replicate"] = t.replicate;
    tj["v"] = t.v;
    tj["derived_seed"] = t.derived_seed;
    tj["horizon"] = t.horizon;
    tj["gamma"] = t.gamma;
    tj["lambda_max"] = t.lambda_max;
    tj["sampler"] = t.sampler;
    tj["file"] = t.file;
    m["tasks"].push_back(tj);
  }
  const fs::path path = fs::path(c.out_dir) / "manifest.json";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw config_error("cannot write " + path.string());
  f << m.dump(2) << "\n";
  return path.string();
}

std::string hash_for(const SweepConfig& c, const std::string& command) {
  json j;
  j["command"] = command;
  j["config"] = config_to_json(c);
  // placement and scheduling must not change the artifact's identity
  j["config"].erase("out_dir");
  j["config"].erase("workers");
  return manifest_hash(j.dump());
}

ProblemSpec spec_for(const SweepConfig& c, const Task& t) {
  ProblemSpec spec;
  spec.alpha = c.alpha;
  spec.beta = c.beta;
  spec.d = t.d;
  spec.v = t.v;
  spec.gamma = 1.0;  // placeholder until derived
  spec.batch = c.batch;
  spec.horizon = t.horizon;
  spec.seed = t.derived_seed;
  return spec;
}

}  // namespace

std::string manifest_hash(const std::string& canonical) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunResult cmd_simulate(const SweepConfig& config) {
  config.validate();
  fs::create_directories(config.out_dir);
  const std::string hash = hash_for(config, "simulate");
  std::vector<Task> tasks = make_tasks(config);
  run_pool(config, tasks, [&](Task& t) {
    ProblemSpec spec = spec_for(config, t);
    t.sampler = resolve_sampler(config, t.d);
    const CheckpointSchedule sched = schedule_for(config, t.horizon);
    SgdOptions opt;
    opt.skip_stability_check = true;  // gated below, on the derived gamma
    LossCurve curve;
    if (t.sampler == "chol") {
      GramFactors gram = compute_gram_streamed(spec);
      t.lambda_max = gram_lambda_max(gram);
      spec.gamma = config.gamma_rule == "auto"
                       ? default_learning_rate_population(spec, t.lambda_max, config.safety)
                       : config.gamma;
      if (config.gamma_rule == "fixed") {
        const double norm =
            population_kernel_norm(config.alpha, spec.v, spec.gamma, spec.batch);
        if (!(spec.gamma * (spec.batch + 1.0) * t.lambda_max < 2.0) || !(norm < 1.0)) {
          throw numeric_error("simulate: fixed gamma unstable at d " + std::to_string(t.d));
        }
      }
      gram.spec = spec;
      opt.sampler = SgdSampler::chol;
      curve = run_sgd_chol(gram, sched, opt);
    } else {
      SpectralModes modes;
      ProblemInstance instance;
      if (t.sampler == "direct") {
        instance = make_problem(spec);
        modes = empirical_modes(instance);
      } else {
        modes = empirical_modes(compute_gram_streamed(spec));
      }
      t.lambda_max = modes.lambda_max();
      spec.gamma = config.gamma_rule == "auto"
                       ? default_learning_rate(spec, modes, config.safety)
                       : config.gamma;
      if (config.gamma_rule == "fixed" &&
          !stability_check(modes, spec.gamma, spec.batch).stable) {
        throw numeric_error("simulate: fixed gamma unstable at d " + std::to_string(t.d));
      }
      if (t.sampler == "direct") {
        instance.spec = spec;
        curve = run_sgd(instance, sched, opt);
      } else {
        opt.sampler = SgdSampler::eigen;
        curve = run_sgd_modes(modes, spec, sched, opt);
      }
    }
    t.gamma = spec.gamma;
    curve.seed = static_cast<uint64_t>(t.replicate);
    t.file = (fs::path(config.out_dir) /
              ("sgd_d" + std::to_string(t.d) + "_s" + std::to_string(t.replicate) + ".csv"))
                 .string();
    write_curve_csv(t.file, curve, hash);
  });
  RunResult result;
  result.manifest_path = write_manifest(config, "simulate", tasks, hash);
  for (const Task& t : tasks) result.files.push_back(t.file);
  return result;
}

RunResult cmd_volterra(const SweepConfig& config) {
  config.validate();
  fs::create_directories(config.out_dir);
  const std::string hash = hash_for(config, "volterra");
  std::vector<Task> tasks = make_tasks(config);
  run_pool(config, tasks, [&](Task& t) {
    ProblemSpec spec = spec_for(config, t);
    t.sampler = config.naive ? "volterra-naive" : "volterra";
    const SpectralModes modes = empirical_modes(compute_gram_streamed(spec));
    t.lambda_max = modes.lambda_max();
    spec.gamma = config.gamma_rule == "auto"
                     ? default_learning_rate(spec, modes, config.safety)
                     : config.gamma;
    t.gamma = spec.gamma;
    const CheckpointSchedule sched = schedule_for(config, t.horizon);
    LossCurve curve = config.naive
                          ? solve_volterra_naive(modes, spec.gamma, spec.batch, sched)
                          : solve_volterra(modes, spec.gamma, spec.batch, sched);
    curve.seed = static_cast<uint64_t>(t.replicate);
    t.file = (fs::path(config.out_dir) /
              ("volterra_d" + std::to_string(t.d) + "_s" + std::to_string(t.replicate) + ".csv"))
                 .string();
    write_curve_csv(t.file, curve, hash);
  });
  RunResult result;
  result.manifest_path = write_manifest(config, "volterra", tasks, hash);
  for (const Task& t : tasks) result.files.push_back(t.file);
  return result;
}

RunResult cmd_theory(const SweepConfig& config) {
  config.validate();
  fs::create_directories(config.out_dir);
  const std::string hash = hash_for(config, "theory");
  const int64_t d = config.d_list.front();
  const int64_t v = v_for(config, d);
  const int64_t horizon = horizon_for(config, d);
  TheoryParams params;
  params.alpha = config.alpha;
  params.beta = config.beta;
  params.d = d;
  params.v = static_cast<uint64_t>(v);
  params.batch = config.batch;
  ProblemSpec spec;
  spec.alpha = config.alpha;
  spec.beta = config.beta;
  spec.d = d;
  spec.v = v;
  spec.batch = config.batch;
  spec.horizon = horizon;
  params.gamma = config.gamma_rule == "auto"
                     ? default_learning_rate_population(spec, 1.0, config.safety)
                     : config.gamma;

  std::ostringstream out;
  out << "# manifest=" << hash << "\n";
  out << "r,F0,Fpp,Fac,Kpp,surrogate,argmax\n";
  const double f0 = component_value(ComponentKind::F0, params, 0.0);
  const int n = 200;
  char line[256];
  for (int i = 0; i <= n; ++i) {
    const double r = std::pow(static_cast<double>(horizon), static_cast<double>(i) / n);
    const double fpp = component_value(ComponentKind::Fpp, params, r);
    const double fac = component_value(ComponentKind::Fac, params, r);
    double kpp = std::numeric_limits<double>::quiet_NaN();
    if (params.alpha > 0.25) kpp = component_value(ComponentKind::Kpp, params, r);
    const SurrogateValue sur = surrogate_loss(params, r);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n", r, f0, fpp,
                  fac, kpp, sur.value, component_name(sur.argmax).c_str());
    out << line;
  }
  const std::string path = (fs::path(config.out_dir) / "theory.csv").string();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw config_error("cannot write " + path);
  f << out.str();
  RunResult result;
  result.files.push_back(path);
  std::vector<Task> tasks;
  result.manifest_path = write_manifest(config, "theory", tasks, hash);
  return result;
}

RunResult cmd_spectrum(const SweepConfig& config) {
  config.validate();
  fs::create_directories(config.out_dir);
  const std::string hash = hash_for(config, "spectrum");
  const int64_t d = config.d_list.front();
  const int64_t v = v_for(config, d);
  SpectrumDims dims{config.alpha, d, static_cast<uint64_t>(v), 200000};
  const double eta = std::pow(static_cast<double>(d), -2.0 * config.alpha);
  const std::vector<std::complex<double>> grid = default_density_grid(dims);
  const std::vector<SpectralSolution> sols = solve_m_grid(dims, grid);
  std::ostringstream out;
  out << "# manifest=" << hash << "\n";
  out << "u,eta,trace_density,target_density\n";
  constexpr double inv_pi = 0.31830988618379067154;
  char line[192];
  for (const SpectralSolution& sol : sols) {
    const std::complex<double> trace =
        (-static_cast<double>(v) + (1.0 - sol.m) * static_cast<double>(d)) / sol.z;
    const std::complex<double> target = target_stieltjes(dims, config.beta, sol.m, sol.z);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", sol.z.real(), eta,
                  inv_pi * trace.imag(), inv_pi * target.imag());
    out << line;
  }
  const std::string path = (fs::path(config.out_dir) / "spectrum.csv").string();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw config_error("cannot write " + path);
  f << out.str();
  RunResult result;
  result.files.push_back(path);
  std::vector<Task> tasks;
  result.manifest_path = write_manifest(config, "spectrum", tasks, hash);
  return result;
}

std::string cmd_phase_json(double alpha, double beta) {
  json j;
  j["alpha"] = alpha;
  j["beta"] = beta;
  const Phase phase = classify_phase(alpha, beta);
  j["phase"] = phase.name();
  try {
    const ExponentPair e = theory_exponents(alpha, beta);
    j["eta"] = e.eta;
    j["xi"] = e.xi;
    j["tradeoff"] = e.tradeoff;
  } catch (const config_error& e) {
    j["eta"] = nullptr;
    j["xi"] = nullptr;
    j["tradeoff"] = nullptr;
    j["note"] = e.what();
  }
  return j.dump();
}

namespace {

json fit_to_json(const FrontierFit& fit) {
  json j;
  j["a"] = fit.a;
  j["b"] = fit.b;
  j["residual"] = fit.residual;
  j["n_slices"] = fit.n_slices;
  j["window"] = {fit.window.first, fit.window.second};
  if (fit.low_information) j["low_information"] = true;
  return j;
}

}  // namespace

std::string cmd_frontier_json(const FrontierArgs& args) {
  if (args.inputs.empty()) throw config_error("frontier: no input curves");
  std::vector<LossCurve> curves;
  for (const std::string& pattern : args.inputs) {
    auto batch = read_curves_glob(pattern);
    curves.insert(curves.end(), batch.begin(), batch.end());
  }
  const bool averaged = curves.size() != average_curves_by_d(curves).size();
  const std::vector<LossCurve> by_d = average_curves_by_d(curves);

  json report;
  report["config"] = {{"window", {args.fmin, args.fmax}},
                      {"slices", args.slices},
                      {"approach", args.approach},
                      {"inputs", args.inputs},
                      {"curves", by_d.size()},
                      {"averaged_replicates", averaged}};
  const auto slices = isoflop_slices(by_d, {args.fmin, args.fmax}, args.slices);
  report["eta"] = fit_to_json(frontier_eta(slices));
  report["eta"]["eta"] = -report["eta"]["b"].get<double>();
  json xi;
  const bool want_all = args.approach == "all";
  if (want_all || args.approach == "1") {
    xi["approach1"] = fit_to_json(approach1_xi(slices));
  }
  if (want_all || args.approach == "2") {
    const Approach2Result a2 = approach2(by_d, slices);
    xi["approach2"] = fit_to_json(a2.fit);
    xi["approach2"]["convex_failures"] = a2.convex_failures;
    xi["approach2"]["rejected"] = a2.rejected;
  }
  if (want_all || args.approach == "0") {
    json series = json::array();
    for (const TangentPoint& t : approach0(by_d)) {
      series.push_back({{"flops1", t.flops1}, {"flops2", t.flops2}, {"xi", t.xi}});
    }
    xi["approach0_series"] = series;
  }
  report["xi"] = xi;
  json jslices = json::array();
  for (const IsoFlopSlice& s : slices) {
    jslices.push_back({{"flops", s.flops}, {"min_d", s.min_d}, {"min_risk", s.min_risk}});
  }
  report["slices"] = jslices;
  const std::string text = report.dump(2);
  if (!args.out_path.empty()) {
    std::ofstream f(args.out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw config_error("cannot write " + args.out_path);
    f << text << "\n";
  }
  return text;
}

std::string cmd_sweep(const SweepConfig& config) {
  config.validate();
  const RunResult sgd = cmd_simulate(config);
  SweepConfig volt = config;
  volt.seeds = 1;
  const RunResult volterra = cmd_volterra(volt);

  FrontierArgs fargs;
  fargs.fmin = config.window_fmin;
  fargs.fmax = config.window_fmax;
  fargs.slices = config.slices;
  fargs.approach = "all";
  fargs.inputs = sgd.files;
  json report;
  report["sgd_frontier"] = json::parse(cmd_frontier_json(fargs));
  fargs.inputs = volterra.files;
  report["volterra_frontier"] = json::parse(cmd_frontier_json(fargs));
  const std::string path = (fs::path(config.out_dir) / "report.json").string();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw config_error("cannot write " + path);
  f << report.dump(2) << "\n";
  return report.dump(2);
}

SweepConfig config_from_manifest(const std::string& manifest_path) {
  std::ifstream f(manifest_path);
  if (!f) throw config_error("cannot open manifest: " + manifest_path);
  json m = json::parse(f, nullptr, true, true);
  return config_from_json(m.at("config"));
}

}  // namespace plrf
