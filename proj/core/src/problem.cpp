#include "plrf/problem.hpp"

#include <cmath>

#include "plrf/errors.hpp"

namespace plrf {

void ProblemSpec::validate() const {
  if (!(alpha > 0.0)) throw config_error("alpha must be positive");
  if (d < 1) throw config_error("d must be a positive integer");
  if (v <= d) throw config_error("v must exceed d");
  // gamma = 0 is allowed as the no-update baseline
  if (!(gamma >= 0.0)) throw config_error("gamma must be non-negative");
  if (batch < 1) throw config_error("batch must be >= 1");
  if (horizon < 1) throw config_error("horizon must be >= 1");
}

double matrix_entry(const ProblemSpec& spec, int64_t i, int64_t j) {
  const CounterRng rng = CounterRng::derive(spec.seed, {kTagMatrix});
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.d));
  return scale * rng.normal(static_cast<uint64_t>(i) * static_cast<uint64_t>(spec.d) +
                            static_cast<uint64_t>(j));
}

ProblemInstance make_problem(const ProblemSpec& spec) {
  spec.validate();
  ProblemInstance inst;
  inst.spec = spec;
  inst.b.resize(spec.v);
  inst.d_diag.resize(spec.v);
  for (int64_t j = 0; j < spec.v; ++j) {
    const double idx = static_cast<double>(j + 1);
    inst.b[j] = std::pow(idx, -spec.beta);
    inst.d_diag[j] = std::pow(idx, -2.0 * spec.alpha);
  }
  inst.W.resize(spec.v, spec.d);
  const CounterRng rng = CounterRng::derive(spec.seed, {kTagMatrix});
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.d));
  for (int64_t i = 0; i < spec.v; ++i) {
    const uint64_t row_base = static_cast<uint64_t>(i) * static_cast<uint64_t>(spec.d);
    for (int64_t j = 0; j < spec.d; ++j) {
      inst.W(i, j) = scale * rng.normal(row_base + static_cast<uint64_t>(j));
    }
  }
  inst.theta = Eigen::VectorXd::Zero(spec.d);
  return inst;
}

double population_risk(const ProblemInstance& instance, const Eigen::VectorXd& theta) {
  if (theta.size() != instance.spec.d) throw config_error("theta dimension mismatch");
  if (theta.isZero(0.0)) return initial_risk(instance.spec.alpha, instance.spec.beta, instance.spec.v);
  Eigen::VectorXd resid = instance.W * theta - instance.b;
  return resid.dot(instance.d_diag.cwiseProduct(resid));
}

double initial_risk(double alpha, double beta, int64_t v) {
  double sum = 0.0;
  for (int64_t j = 1; j <= v; ++j) sum += std::pow(static_cast<double>(j), -2.0 * (alpha + beta));
  return sum;
}

double flops(int64_t r, const ProblemSpec& spec) {
  if (r < 0) throw config_error("iteration count must be non-negative");
  return static_cast<double>(r) * static_cast<double>(spec.batch) * static_cast<double>(spec.d);
}

}  // namespace plrf
