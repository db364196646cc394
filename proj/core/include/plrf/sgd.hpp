#pragma once

#include <cstdint>

#include "plrf/gram.hpp"
#include "plrf/modes.hpp"
#include "plrf/problem.hpp"
#include "plrf/schedule.hpp"

namespace plrf {

// How the fresh Gaussian samples of one-pass SGD are realized. All three
// produce the same process in distribution:
//   direct  draws x in R^v and applies theta -= gamma sum_i W^T x_i (...)
//           verbatim (O(v d) per step);
//   eigen   runs the same update in the eigenbasis of W^T D W, where each
//           step costs O(d);
//   chol    samples W^T D^{1/2} z through a Cholesky factor of W^T D W in
//           blocks (O(d^2) per step, GEMM-amortized).
enum class SgdSampler { direct, eigen, chol };

struct SgdOptions {
  SgdSampler sampler = SgdSampler::direct;
  bool skip_stability_check = false;  // explicit override of the (gamma, B) gate
  uint64_t replicate = 0;             // extra stream key; 0 = base stream
  double divergence_factor = 1e6;     // risk > factor * initial risk => diverged
};

// One-pass minibatch SGD with exact population-risk checkpoints (iteration 0
// always included). Resets theta to zero at the start; the final iterate is
// left in instance.theta for the direct sampler.
LossCurve run_sgd(ProblemInstance& instance, const CheckpointSchedule& schedule,
                  const SgdOptions& options = {});

// Eigenbasis sampler on precomputed modes (exact same law).
LossCurve run_sgd_modes(const SpectralModes& modes, const ProblemSpec& spec,
                        const CheckpointSchedule& schedule, const SgdOptions& options = {});

// Cholesky-factor sampler on a precomputed Gram (exact same law).
LossCurve run_sgd_chol(const GramFactors& gram, const CheckpointSchedule& schedule,
                       const SgdOptions& options = {});

// Largest gamma with gamma (B+1) lambda_max <= 2 s and kernel_norm <= s,
// found by bisection (kernel_norm is monotone in gamma). safety s = 1/2 is
// "half the convergence threshold".
double default_learning_rate(const ProblemSpec& spec, const SpectralModes& modes,
                             double safety = 0.5);

// Population form of the kernel norm (Cor.-style sum):
//   (gamma/2) sum_{j<=v} j^{-2a} / (1 - (1/2) j^{-2a} gamma (B+1)).
// v = 0 means infinite (requires 2a > 1).
double population_kernel_norm(double alpha, uint64_t v, double gamma, int64_t batch);

// Same bisection as default_learning_rate but with the population norm and
// an externally supplied lambda_max; used when no eigendecomposition exists.
double default_learning_rate_population(const ProblemSpec& spec, double lambda_max,
                                        double safety = 0.5);

}  // namespace plrf
