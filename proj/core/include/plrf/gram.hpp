#pragma once

#include <Eigen/Core>

#include "plrf/problem.hpp"

namespace plrf {

// Sufficient statistics of a realized problem for everything downstream of
// the SGD update law: K = W^T D W, c = W^T D b, and the risk at theta = 0.
// P(theta) = theta^T K theta - 2 theta^T c + total_risk.
struct GramFactors {
  ProblemSpec spec;
  Eigen::MatrixXd gram;   // d x d, lower triangle filled
  Eigen::VectorXd cross;  // length d
  double total_risk;
};

GramFactors compute_gram(const ProblemInstance& instance);

// Streams W in row blocks through the counter RNG; never materializes W.
// Produces the same values as compute_gram(make_problem(spec)) up to
// summation order inside the BLAS update.
GramFactors compute_gram_streamed(const ProblemSpec& spec, int64_t block_rows = 1024);

// Largest eigenvalue of K by power iteration (for stability gates when a
// full decomposition is not wanted).
double gram_lambda_max(const GramFactors& gram, int iters = 100);

}  // namespace plrf
