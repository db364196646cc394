#pragma once

#include <vector>

#include "plrf/gram.hpp"
#include "plrf/problem.hpp"

namespace plrf {

// Eigenvalue/weight decomposition of the empirical covariance: lambdas are
// the nonzero eigenvalues of K = D^{1/2} W W^T D^{1/2} (equivalently of
// W^T D W), weights are w_i = <q_i, D^{1/2} b>^2 for the matching
// eigenvectors, and `irreducible` is the squared component of D^{1/2} b
// outside the range of D^{1/2} W (the risk floor).
struct SpectralModes {
  int64_t d = 0;                // model size (for flops accounting)
  std::vector<double> lambdas;  // non-increasing, > 0
  std::vector<double> weights;  // same length
  double irreducible = 0.0;
  bool rank_deficient = false;  // modes below cutoff were dropped

  double total_risk() const;  // sum weights + irreducible
  double lambda_max() const { return lambdas.empty() ? 0.0 : lambdas.front(); }
};

SpectralModes empirical_modes(const ProblemInstance& instance);
SpectralModes empirical_modes(const GramFactors& gram);

}  // namespace plrf
