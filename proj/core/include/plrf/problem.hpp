#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "plrf/rng.hpp"

namespace plrf {

// Model parameters (alpha, beta, d, v) plus optimizer parameters (gamma, B)
// and the run horizon. Single source of truth for a run.
struct ProblemSpec {
  double alpha = 0.5;    // data complexity, > 0
  double beta = 0.5;     // target complexity, may be <= 0
  int64_t d = 0;         // model parameter count
  int64_t v = 0;         // ambient dimension, > d
  double gamma = 0.0;    // learning rate, > 0
  int64_t batch = 1;     // B >= 1
  int64_t horizon = 1;   // max SGD iterations
  uint64_t seed = 1;

  void validate() const;  // throws config_error
};

// A realized PLRF problem: W has iid N(0, 1/d) entries, b_j = j^-beta,
// D = diag(j^-2alpha). theta is the optimizer state (owned by one run).
struct ProblemInstance {
  ProblemSpec spec;
  Eigen::MatrixXd W;       // v x d
  Eigen::VectorXd b;       // length v
  Eigen::VectorXd d_diag;  // length v, strictly positive, non-increasing
  Eigen::VectorXd theta;   // length d
};

ProblemInstance make_problem(const ProblemSpec& spec);

// Entry of W at (row i, col j), 0-based, as drawn by make_problem. Streamed
// Gram assembly regenerates the same values without materializing W.
double matrix_entry(const ProblemSpec& spec, int64_t i, int64_t j);

// <D(W theta - b), W theta - b>, evaluated exactly (no sampling).
double population_risk(const ProblemInstance& instance, const Eigen::VectorXd& theta);

// Risk at theta = 0: sum_{j<=v} j^{-2 alpha - 2 beta}. The canonical
// ascending-j accumulation; other paths reuse it bit-for-bit.
double initial_risk(double alpha, double beta, int64_t v);

// Compute accounting: r * B * d.
double flops(int64_t r, const ProblemSpec& spec);

struct CurvePoint {
  int64_t iter;
  double flops;
  double risk;
};

// Checkpointed (iteration, flops, risk) triples for one run.
struct LossCurve {
  std::string source;  // "sgd" | "volterra" | "theory"
  int64_t d = 0;
  uint64_t seed = 0;
  std::vector<CurvePoint> points;
  bool diverged = false;
};

}  // namespace plrf
