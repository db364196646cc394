#include <doctest.h>

#include <cmath>
#include <vector>

#include "plrf/errors.hpp"
#include "plrf/modes.hpp"
#include "plrf/problem.hpp"
#include "plrf/sgd.hpp"
#include "plrf/volterra.hpp"

using namespace plrf;

namespace {

ProblemSpec spec_for(int64_t d, int64_t v, double gamma, uint64_t seed, double alpha = 0.7,
                     double beta = 0.3, int64_t horizon = 100) {
  ProblemSpec s;
  s.alpha = alpha;
  s.beta = beta;
  s.d = d;
  s.v = v;
  s.gamma = gamma;
  s.batch = 1;
  s.horizon = horizon;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("zero learning rate leaves the risk at the initial value") {
  ProblemInstance inst = make_problem(spec_for(6, 24, 0.0, 3));
  const LossCurve curve = run_sgd(inst, CheckpointSchedule::geometric_default(50));
  const double expected = initial_risk(0.7, 0.3, 24);
  for (const CurvePoint& p : curve.points) {
    CHECK(p.risk == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("one step matches the hand-computed update") {
  // d=1, v=2: theta_1 = gamma * <x, b> * (W^T x) from theta_0 = 0.
  ProblemSpec spec = spec_for(1, 2, 0.25, 11, 0.7, 0.3, 1);
  ProblemInstance inst = make_problem(spec);
  SgdOptions opt;
  opt.skip_stability_check = true;
  const LossCurve curve = run_sgd(inst, CheckpointSchedule::linear(1, 1, 1), opt);
  // replay the recorded z-draw
  const CounterRng rng = CounterRng::derive(spec.seed, {kTagSgdNoise, kTagReplicate, 0});
  const double x0 = std::pow(1.0, -0.7) * rng.normal(0);
  const double x1 = std::pow(2.0, -0.7) * rng.normal(1);
  const double wx = inst.W(0, 0) * x0 + inst.W(1, 0) * x1;
  const double xb = x0 * 1.0 + x1 * std::pow(2.0, -0.3);
  const double theta1 = 0.25 * xb * wx;
  CHECK(inst.theta[0] == doctest::Approx(theta1).epsilon(1e-14));
  // the checkpoint at r=1 carries the exact population risk of theta_1
  Eigen::VectorXd t(1);
  t[0] = theta1;
  CHECK(curve.points.back().risk == doctest::Approx(population_risk(inst, t)).epsilon(1e-12));
}

TEST_CASE("runs are reproducible") {
  ProblemInstance a = make_problem(spec_for(8, 32, 0.2, 5));
  ProblemInstance b = make_problem(spec_for(8, 32, 0.2, 5));
  SgdOptions opt;
  opt.skip_stability_check = true;
  const LossCurve ca = run_sgd(a, CheckpointSchedule::geometric_default(100), opt);
  const LossCurve cb = run_sgd(b, CheckpointSchedule::geometric_default(100), opt);
  REQUIRE(ca.points.size() == cb.points.size());
  for (size_t i = 0; i < ca.points.size(); ++i) {
    CHECK(ca.points[i].risk == cb.points[i].risk);  // bitwise
  }
}

TEST_CASE("checkpoint zero is exactly the theta=0 population risk") {
  ProblemInstance inst = make_problem(spec_for(5, 20, 0.1, 9));
  SgdOptions opt;
  opt.skip_stability_check = true;
  const LossCurve curve = run_sgd(inst, CheckpointSchedule::geometric_default(20), opt);
  CHECK(curve.points.front().iter == 0);
  CHECK(curve.points.front().risk == population_risk(inst, Eigen::VectorXd::Zero(5)));
}

TEST_CASE("divergence is flagged and the curve truncated") {
  ProblemSpec spec = spec_for(4, 16, 3.0, 2);  // far above the threshold
  ProblemInstance inst = make_problem(spec);
  SgdOptions opt;
  opt.skip_stability_check = true;
  const LossCurve curve = run_sgd(inst, CheckpointSchedule::linear(1, 1, 200), opt);
  CHECK(curve.diverged);
  CHECK(curve.points.size() < 201);
}

TEST_CASE("unstable (gamma, B) are rejected unless overridden") {
  ProblemSpec spec = spec_for(4, 16, 3.0, 2);
  ProblemInstance inst = make_problem(spec);
  CHECK_THROWS_AS(run_sgd(inst, CheckpointSchedule::linear(1, 1, 10)), numeric_error);
}

TEST_CASE("seed-averaged risk is non-increasing after burn-in" * doctest::timeout(600)) {
  const int64_t d = 200, v = 800;
  const int n_seeds = 16;
  ProblemSpec probe = spec_for(d, v, 0.1, 1);
  const SpectralModes modes = empirical_modes(compute_gram_streamed(probe));
  const double gamma = default_learning_rate(probe, modes);
  const CheckpointSchedule sched = CheckpointSchedule::linear(10, 10, 300);
  std::vector<std::vector<double>> risks(n_seeds);
  for (int s = 0; s < n_seeds; ++s) {
    ProblemSpec spec = spec_for(d, v, gamma, 100 + static_cast<uint64_t>(s));
    ProblemInstance inst = make_problem(spec);
    SgdOptions opt;
    opt.skip_stability_check = true;
    const LossCurve curve = run_sgd(inst, sched, opt);
    for (const CurvePoint& p : curve.points) {
      if (p.iter >= 10) risks[s].push_back(p.risk);
    }
  }
  const size_t n_pts = risks[0].size();
  for (size_t k = 0; k + 1 < n_pts; ++k) {
    double mean_diff = 0.0, var_diff = 0.0;
    for (int s = 0; s < n_seeds; ++s) mean_diff += risks[s][k + 1] - risks[s][k];
    mean_diff /= n_seeds;
    for (int s = 0; s < n_seeds; ++s) {
      const double diff = risks[s][k + 1] - risks[s][k] - mean_diff;
      var_diff += diff * diff;
    }
    const double se = std::sqrt(var_diff / (n_seeds * (n_seeds - 1.0)));
    CHECK(mean_diff <= 3.0 * se);
  }
}

TEST_CASE("default learning rate: single-mode closed form") {
  // With lambda=1, B=1, s=1/2 both constraints solve to gamma = 1/2:
  // gamma (B+1) <= 1 gives 1/2, and the norm gamma/(2-2 gamma) hits 1/2
  // there exactly.
  SpectralModes m;
  m.d = 1;
  m.lambdas = {1.0};
  m.weights = {1.0};
  ProblemSpec spec = spec_for(1, 2, 0.1, 1);
  const double gamma = default_learning_rate(spec, m, 0.5);
  CHECK(gamma == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(kernel_norm(m, gamma, 1) <= 0.5 + 1e-12);
}

TEST_CASE("default learning rate scales like v^{2a-1} below the line") {
  const double alpha = 0.35;
  const int64_t d = 200;
  ProblemSpec s1 = spec_for(d, 800, 0.1, 1, alpha, 0.3);
  ProblemSpec s2 = spec_for(d, 1600, 0.1, 1, alpha, 0.3);
  const double g1 = default_learning_rate(s1, empirical_modes(compute_gram_streamed(s1)));
  const double g2 = default_learning_rate(s2, empirical_modes(compute_gram_streamed(s2)));
  const double expected = std::pow(2.0, 2.0 * alpha - 1.0);
  CHECK(g2 / g1 == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("non-positive safety factor is rejected") {
  SpectralModes m;
  m.d = 1;
  m.lambdas = {1.0};
  m.weights = {1.0};
  ProblemSpec spec = spec_for(1, 2, 0.1, 1);
  CHECK_THROWS_AS(default_learning_rate(spec, m, 0.0), config_error);
}

TEST_CASE("the three samplers share one law" * doctest::timeout(600)) {
  // direct, eigen and chol draw different streams but the seed-mean risks
  // must agree (they are the same Gaussian process in distribution).
  const int64_t d = 64, v = 256;
  ProblemSpec base = spec_for(d, v, 0.1, 77, 0.7, 0.3, 400);
  const GramFactors gram = compute_gram_streamed(base);
  const SpectralModes modes = empirical_modes(gram);
  const double gamma = default_learning_rate(base, modes);
  const int n_seeds = 32;
  const CheckpointSchedule sched = CheckpointSchedule::linear(100, 150, 400);
  std::vector<double> mean_direct(3, 0.0), mean_eigen(3, 0.0), mean_chol(3, 0.0);
  for (int s = 0; s < n_seeds; ++s) {
    ProblemSpec spec = base;
    spec.gamma = gamma;
    SgdOptions opt;
    opt.skip_stability_check = true;
    opt.replicate = static_cast<uint64_t>(s) + 1;
    ProblemInstance inst = make_problem(spec);
    inst.spec.gamma = gamma;
    const LossCurve cd = run_sgd(inst, sched, opt);
    const LossCurve ce = run_sgd_modes(modes, spec, sched, opt);
    GramFactors gram_run = gram;
    gram_run.spec.gamma = gamma;
    const LossCurve cc = run_sgd_chol(gram_run, sched, opt);
    for (int k = 0; k < 3; ++k) {
      mean_direct[k] += cd.points[k + 1].risk / n_seeds;
      mean_eigen[k] += ce.points[k + 1].risk / n_seeds;
      mean_chol[k] += cc.points[k + 1].risk / n_seeds;
    }
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(mean_eigen[k] == doctest::Approx(mean_direct[k]).epsilon(0.10));
    CHECK(mean_chol[k] == doctest::Approx(mean_direct[k]).epsilon(0.10));
  }
}

TEST_CASE("seed-mean sgd approaches the volterra solution" * doctest::timeout(600)) {
  // Small-scale version of the Fig. 3a agreement: d=400, (a,b)=(0.7,0.7),
  // mean of 8 seeds at r = 10^4 within 10% of the volterra value.
  const int64_t d = 400, v = 1600;
  ProblemSpec base = spec_for(d, v, 0.1, 1, 0.7, 0.7, 10000);
  double sgd_mean = 0.0, volterra_mean = 0.0;
  const int n_seeds = 8;
  const CheckpointSchedule sched = CheckpointSchedule::linear(10000, 1, 10000);
  for (int s = 0; s < n_seeds; ++s) {
    ProblemSpec spec = base;
    spec.seed = 1000 + static_cast<uint64_t>(s);
    const GramFactors gram = compute_gram_streamed(spec);
    const SpectralModes modes = empirical_modes(gram);
    spec.gamma = default_learning_rate(spec, modes);
    SgdOptions opt;
    opt.skip_stability_check = true;
    opt.sampler = SgdSampler::eigen;
    const LossCurve sgd = run_sgd_modes(modes, spec, sched, opt);
    const LossCurve volt = solve_volterra(modes, spec.gamma, 1, sched);
    sgd_mean += sgd.points.back().risk / n_seeds;
    volterra_mean += volt.points.back().risk / n_seeds;
  }
  CHECK(sgd_mean == doctest::Approx(volterra_mean).epsilon(0.10));
}
