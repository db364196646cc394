#pragma once

#include <cstdint>
#include <vector>

#include "plrf/modes.hpp"
#include "plrf/problem.hpp"
#include "plrf/schedule.hpp"

namespace plrf {

// rho = 1 - 2 gamma B lambda + gamma^2 B (B+1) lambda^2, the per-mode
// contraction factor of the expected dynamics.
double contraction_factor(double lambda, double gamma, int64_t batch);

// Forcing function F(r) = sum_i w_i rho_i^r + irreducible.
double forcing(const SpectralModes& modes, double gamma, int64_t batch, int64_t r);

// Kernel K(r) = gamma^2 B sum_i lambda_i^2 rho_i^r.
double kernel(const SpectralModes& modes, double gamma, int64_t batch, int64_t r);

// ||K|| = sum_{s>=0} K(s) = sum_i gamma lambda_i / (2 - gamma (B+1) lambda_i).
// Throws numeric_error when any |rho_i| >= 1 (divergent norm).
double kernel_norm(const SpectralModes& modes, double gamma, int64_t batch);

struct StabilityReport {
  bool stable;
  double gd_margin;  // 2 - gamma (B+1) lambda_max
  double norm;       // ||K||, +inf when divergent
};

// Stable iff gamma (B+1) lambda_max < 2 and ||K|| < 1.
StabilityReport stability_check(const SpectralModes& modes, double gamma, int64_t batch);

// Solves P(r) = F(r) + sum_{s<r} K(r-1-s) P(s) for all r <= schedule.max_iter
// via the mode-state recursion (O(horizon * d)); emits scheduled checkpoints
// plus r = 0. Throws numeric_error if unstable.
LossCurve solve_volterra(const SpectralModes& modes, double gamma, int64_t batch,
                         const CheckpointSchedule& schedule);

// Reference O(T^2) evaluation of the same recursion from explicit sequences;
// also serves tests that drive the equation with custom forcing/kernel.
std::vector<double> solve_volterra_naive(const std::vector<double>& forcing_seq,
                                         const std::vector<double>& kernel_seq);

LossCurve solve_volterra_naive(const SpectralModes& modes, double gamma, int64_t batch,
                               const CheckpointSchedule& schedule);

// P, F and (K*F) along the full horizon, sampled at the schedule (plus r=0).
struct VolterraTrace {
  std::vector<int64_t> iters;
  std::vector<double> loss;         // P(r)
  std::vector<double> forcing;      // F(r)
  std::vector<double> convolution;  // (K*F)(r)
};

VolterraTrace solve_volterra_trace(const SpectralModes& modes, double gamma, int64_t batch,
                                   const CheckpointSchedule& schedule);

struct SandwichGap {
  double lower;        // F(r) + (K*F)(r)
  double value;        // P(r)
  double upper_ratio;  // (P(r) - F(r)) / max(eps, (K*F)(r))
};

SandwichGap sandwich_gap(const SpectralModes& modes, double gamma, int64_t batch, int64_t r);

}  // namespace plrf
