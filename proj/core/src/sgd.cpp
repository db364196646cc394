#include "plrf/sgd.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "plrf/errors.hpp"
#include "plrf/quadrature.hpp"
#include "plrf/volterra.hpp"

namespace plrf {

namespace {

CounterRng noise_stream(const ProblemSpec& spec, uint64_t replicate) {
  return CounterRng::derive(spec.seed, {kTagSgdNoise, kTagReplicate, replicate});
}

// Checkpoint bookkeeping shared by the samplers.
struct Recorder {
  LossCurve curve;
  std::vector<int64_t> iters;
  size_t next = 0;
  double initial = 0.0;
  double limit = 0.0;
  double flops_per_iter;

  Recorder(const ProblemSpec& spec, const CheckpointSchedule& schedule, double divergence_factor)
      : flops_per_iter(static_cast<double>(spec.batch) * static_cast<double>(spec.d)) {
    curve.source = "sgd";
    curve.d = spec.d;
    curve.seed = spec.seed;
    iters = schedule.iterations();
    if (iters.empty() || iters.front() != 0) iters.insert(iters.begin(), 0);
    limit = divergence_factor;
  }

  bool wants(int64_t r) const { return next < iters.size() && iters[next] == r; }
  int64_t horizon() const { return iters.back(); }

  // Returns false once the curve is truncated by divergence.
  bool record(int64_t r, double risk) {
    if (r == 0) initial = risk;
    curve.points.push_back({r, static_cast<double>(r) * flops_per_iter, risk});
    ++next;
    if (!(risk <= limit * initial) || !std::isfinite(risk)) {
      curve.diverged = true;
      return false;
    }
    return true;
  }
};

void check_gate(const SpectralModes& modes, const ProblemSpec& spec, const SgdOptions& opt) {
  if (opt.skip_stability_check) return;
  const StabilityReport rep = stability_check(modes, spec.gamma, spec.batch);
  if (!rep.stable) {
    throw numeric_error("run_sgd: (gamma, B) fail the stability check (gd_margin " +
                        std::to_string(rep.gd_margin) + ", kernel norm " +
                        std::to_string(rep.norm) + "); set the override to force the run");
  }
}

}  // namespace

LossCurve run_sgd(ProblemInstance& instance, const CheckpointSchedule& schedule,
                  const SgdOptions& options) {
  const ProblemSpec& spec = instance.spec;
  spec.validate();
  if (!options.skip_stability_check) {
    check_gate(empirical_modes(instance), spec, options);
  }
  instance.theta.setZero();
  Recorder rec(spec, schedule, options.divergence_factor);
  const CounterRng rng = noise_stream(spec, options.replicate);
  uint64_t ctr = 0;

  const int64_t v = spec.v;
  const int64_t b_sz = spec.batch;
  Eigen::VectorXd x(v), u(spec.d);
  Eigen::VectorXd root_pow(v);  // j^-alpha
  for (int64_t j = 0; j < v; ++j) {
    root_pow[j] = std::pow(static_cast<double>(j + 1), -spec.alpha);
  }
  if (rec.wants(0) && !rec.record(0, initial_risk(spec.alpha, spec.beta, spec.v))) {
    return rec.curve;
  }
  for (int64_t r = 0; r < rec.horizon(); ++r) {
    for (int64_t i = 0; i < b_sz; ++i) {
      for (int64_t j = 0; j < v; ++j) x[j] = root_pow[j] * rng.normal(ctr++);
      u.noalias() = instance.W.transpose() * x;
      const double err = u.dot(instance.theta) - x.dot(instance.b);
      instance.theta.noalias() -= spec.gamma * err * u;
    }
    if (rec.wants(r + 1) && !rec.record(r + 1, population_risk(instance, instance.theta))) {
      break;
    }
  }
  return rec.curve;
}

LossCurve run_sgd_modes(const SpectralModes& modes, const ProblemSpec& spec,
                        const CheckpointSchedule& schedule, const SgdOptions& options) {
  spec.validate();
  check_gate(modes, spec, options);
  Recorder rec(spec, schedule, options.divergence_factor);
  const CounterRng rng = noise_stream(spec, options.replicate);
  uint64_t ctr = 0;

  const size_t n = modes.lambdas.size();
  Eigen::VectorXd sigma(n), root_w(n), phi = Eigen::VectorXd::Zero(n), w(n);
  for (size_t i = 0; i < n; ++i) {
    sigma[i] = std::sqrt(modes.lambdas[i]);
    root_w[i] = std::sqrt(modes.weights[i]);
  }
  const double root_irr = std::sqrt(modes.irreducible);
  // In the eigenbasis the risk is sum_k (sigma_k phi_k - sqrt(w_k))^2 + irr.
  auto risk = [&]() {
    double s = modes.irreducible;
    for (size_t k = 0; k < n; ++k) {
      const double resid = sigma[k] * phi[k] - root_w[k];
      s += resid * resid;
    }
    return s;
  };
  if (rec.wants(0) && !rec.record(0, modes.total_risk())) return rec.curve;
  for (int64_t r = 0; r < rec.horizon(); ++r) {
    for (int64_t i = 0; i < spec.batch; ++i) {
      double proj = 0.0, label = 0.0;
      for (size_t k = 0; k < n; ++k) {
        w[k] = rng.normal(ctr++);
        proj += sigma[k] * w[k] * phi[k];
        label += root_w[k] * w[k];
      }
      label += root_irr * rng.normal(ctr++);
      const double step = spec.gamma * (proj - label);
      for (size_t k = 0; k < n; ++k) phi[k] -= step * sigma[k] * w[k];
    }
    if (rec.wants(r + 1) && !rec.record(r + 1, risk())) break;
  }
  return rec.curve;
}

LossCurve run_sgd_chol(const GramFactors& gram, const CheckpointSchedule& schedule,
                       const SgdOptions& options) {
  const ProblemSpec& spec = gram.spec;
  spec.validate();
  if (!options.skip_stability_check) {
    const double lam_max = gram_lambda_max(gram);
    const double norm = population_kernel_norm(spec.alpha, spec.v, spec.gamma, spec.batch);
    if (!(spec.gamma * (spec.batch + 1.0) * lam_max < 2.0) || !(norm < 1.0)) {
      throw numeric_error("run_sgd_chol: (gamma, B) fail the stability gate");
    }
  }
  const int64_t d = spec.d;
  Eigen::MatrixXd chol = gram.gram;
  {
    // In-place lower Cholesky; K is PD for generic W.
    Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(chol);
    if (llt.info() != Eigen::Success) {
      throw numeric_error("run_sgd_chol: Gram matrix not positive definite");
    }
  }
  // g = L^{-1} c gives labels y = g.w + sqrt(irr) e with the right covariance.
  Eigen::VectorXd g = gram.cross;
  chol.triangularView<Eigen::Lower>().solveInPlace(g);
  const double irr = std::max(gram.total_risk - g.squaredNorm(), 0.0);
  const double root_irr = std::sqrt(irr);

  Recorder rec(spec, schedule, options.divergence_factor);
  const CounterRng rng = noise_stream(spec, options.replicate);
  uint64_t ctr = 0;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d);
  // Risk via the factor: P = ||L^T theta - g||^2 + irr.
  auto risk = [&]() {
    Eigen::VectorXd t = chol.triangularView<Eigen::Lower>().transpose() * theta;
    return (t - g).squaredNorm() + irr;
  };
  if (rec.wants(0) && !rec.record(0, gram.total_risk)) return rec.curve;

  // Pre-generate noise for `block` steps at a time: U = L Wn (d x cols GEMM),
  // labels y = g^T Wn + sqrt(irr) e. Sample u_r = U.col(t) is N(0, K) jointly
  // with y_r, independent of theta, so batching is exact.
  const int64_t block = 64;
  const int64_t cols_per_step = spec.batch;
  Eigen::MatrixXd wn(d, block * cols_per_step), u(d, block * cols_per_step);
  Eigen::VectorXd labels(block * cols_per_step);
  int64_t r = 0;
  while (r < rec.horizon()) {
    const int64_t steps = std::min<int64_t>(block, rec.horizon() - r);
    const int64_t cols = steps * cols_per_step;
    for (int64_t cidx = 0; cidx < cols; ++cidx) {
      for (int64_t k = 0; k < d; ++k) wn(k, cidx) = rng.normal(ctr++);
      labels[cidx] = g.dot(wn.col(cidx)) + root_irr * rng.normal(ctr++);
    }
    u.leftCols(cols).noalias() = chol.triangularView<Eigen::Lower>() * wn.leftCols(cols);
    bool stop = false;
    for (int64_t s = 0; s < steps && !stop; ++s) {
      Eigen::VectorXd delta = Eigen::VectorXd::Zero(d);
      for (int64_t i = 0; i < cols_per_step; ++i) {
        const int64_t cidx = s * cols_per_step + i;
        const double err = u.col(cidx).dot(theta) - labels[cidx];
        delta.noalias() += err * u.col(cidx);
      }
      theta.noalias() -= spec.gamma * delta;
      ++r;
      if (rec.wants(r) && !rec.record(r, risk())) stop = true;
    }
    if (stop) break;
  }
  return rec.curve;
}

double population_kernel_norm(double alpha, uint64_t v, double gamma, int64_t batch) {
  if (gamma == 0.0) return 0.0;
  const double a2 = 2.0 * alpha;
  const double gb1 = gamma * (static_cast<double>(batch) + 1.0);
  if (v == 0 && !(a2 > 1.0)) {
    throw config_error("population_kernel_norm: infinite v requires 2a > 1");
  }
  const uint64_t head = (v == 0) ? 1000000 : std::min<uint64_t>(v, 1000000);
  double s = 0.0;
  for (uint64_t j = 1; j <= head; ++j) {
    const double lam = std::pow(static_cast<double>(j), -a2);
    const double denom = 1.0 - 0.5 * lam * gb1;
    if (denom <= 0.0) throw numeric_error("population_kernel_norm diverges");
    s += lam / denom;
  }
  if (v == 0 || v > head) {
    const double x0 = static_cast<double>(head) + 0.5;
    const double x1 = (v == 0) ? std::pow(1e-16 * (a2 - 1.0) * s, 1.0 / (1.0 - a2))
                               : static_cast<double>(v) + 0.5;
    if (x1 > x0) {
      s += integrate(
          [&](double t) {
            const double x = std::exp(t);
            const double lam = std::pow(x, -a2);
            return x * lam / (1.0 - 0.5 * lam * gb1);
          },
          std::log(x0), std::log(x1));
    }
  }
  return 0.5 * gamma * s;
}

namespace {

double bisect_gamma(double gamma_hi, double safety, const std::function<double(double)>& norm) {
  if (norm(gamma_hi) <= safety) return gamma_hi;
  double lo = 0.0, hi = gamma_hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (norm(mid) <= safety) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * hi) break;
  }
  return lo;
}

}  // namespace

double default_learning_rate(const ProblemSpec& spec, const SpectralModes& modes,
                             double safety) {
  if (!(safety > 0.0)) throw config_error("safety factor must be positive");
  const double lam_max = modes.lambda_max();
  if (lam_max <= 0.0) throw config_error("default_learning_rate: no spectrum");
  const double gamma_hi = 2.0 * safety / ((static_cast<double>(spec.batch) + 1.0) * lam_max);
  return bisect_gamma(gamma_hi, safety, [&](double gamma) {
    return kernel_norm(modes, gamma, spec.batch);
  });
}

double default_learning_rate_population(const ProblemSpec& spec, double lambda_max,
                                        double safety) {
  if (!(safety > 0.0)) throw config_error("safety factor must be positive");
  if (lambda_max <= 0.0) throw config_error("default_learning_rate: lambda_max must be positive");
  const double gamma_hi =
      2.0 * safety / ((static_cast<double>(spec.batch) + 1.0) * lambda_max);
  return bisect_gamma(gamma_hi, safety, [&](double gamma) {
    return population_kernel_norm(spec.alpha, spec.v, gamma, spec.batch);
  });
}

}  // namespace plrf
