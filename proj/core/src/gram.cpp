#include "plrf/gram.hpp"

#include <cblas.h>

#include <cmath>

#include "plrf/errors.hpp"

namespace plrf {

namespace {

void syrk_accumulate(Eigen::MatrixXd& gram, const Eigen::MatrixXd& block) {
  // gram (lower) += block^T block;  block is rows x d, col-major.
  cblas_dsyrk(CblasColMajor, CblasLower, CblasTrans, static_cast<int>(gram.rows()),
              static_cast<int>(block.rows()), 1.0, block.data(),
              static_cast<int>(block.rows()), 1.0, gram.data(), static_cast<int>(gram.rows()));
}

}  // namespace

GramFactors compute_gram(const ProblemInstance& instance) {
  const ProblemSpec& spec = instance.spec;
  GramFactors g;
  g.spec = spec;
  // A = D^{1/2} W, row j scaled by j^-alpha.
  Eigen::VectorXd root_d = instance.d_diag.cwiseSqrt();
  Eigen::MatrixXd a = root_d.asDiagonal() * instance.W;
  g.gram = Eigen::MatrixXd::Zero(spec.d, spec.d);
  syrk_accumulate(g.gram, a);
  g.cross = a.transpose() * (root_d.cwiseProduct(instance.b));
  g.total_risk = initial_risk(spec.alpha, spec.beta, spec.v);
  return g;
}

GramFactors compute_gram_streamed(const ProblemSpec& spec, int64_t block_rows) {
  spec.validate();
  GramFactors g;
  g.spec = spec;
  g.gram = Eigen::MatrixXd::Zero(spec.d, spec.d);
  g.cross = Eigen::VectorXd::Zero(spec.d);
  const CounterRng rng = CounterRng::derive(spec.seed, {kTagMatrix});
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.d));
  Eigen::MatrixXd block;
  for (int64_t row0 = 0; row0 < spec.v; row0 += block_rows) {
    const int64_t rows = std::min(block_rows, spec.v - row0);
    block.resize(rows, spec.d);
    for (int64_t i = 0; i < rows; ++i) {
      const int64_t j_row = row0 + i;  // 0-based row of W
      const double root_dj = std::pow(static_cast<double>(j_row + 1), -spec.alpha);
      const uint64_t row_base =
          static_cast<uint64_t>(j_row) * static_cast<uint64_t>(spec.d);
      for (int64_t c = 0; c < spec.d; ++c) {
        block(i, c) = root_dj * scale * rng.normal(row_base + static_cast<uint64_t>(c));
      }
    }
    syrk_accumulate(g.gram, block);
    for (int64_t i = 0; i < rows; ++i) {
      const int64_t j_row = row0 + i;
      const double root_db =
          std::pow(static_cast<double>(j_row + 1), -spec.alpha - spec.beta);
      g.cross.noalias() += root_db * block.row(i).transpose();
    }
  }
  g.total_risk = initial_risk(spec.alpha, spec.beta, spec.v);
  return g;
}

double gram_lambda_max(const GramFactors& gram, int iters) {
  const int64_t d = gram.spec.d;
  Eigen::VectorXd x = Eigen::VectorXd::Ones(d).normalized();
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd y = gram.gram.selfadjointView<Eigen::Lower>() * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    const double next = x.dot(gram.gram.selfadjointView<Eigen::Lower>() * x);
    if (std::abs(next - lambda) <= 1e-12 * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace plrf
