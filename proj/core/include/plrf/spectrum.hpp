#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace plrf {

// Dimensions entering the self-consistent equation
//   m + (1/d) sum_{j<=v} j^{-2a} m / (j^{-2a} m - z) = 1.
// v may be astronomically large; sums switch to a midpoint tail integral
// past `head_terms` entries.
struct SpectrumDims {
  double alpha;
  int64_t d;
  uint64_t v;
  uint64_t head_terms = 200000;  // exact summation cutoff
};

struct SpectralSolution {
  std::complex<double> z;
  std::complex<double> m;
  double residual;       // |F(m; z) - 1|
  double residual_prev;  // residual before the final update
  int iterations;
};

// Newton iteration from `init`; residual <= tol on success. Falls back to a
// damped fixed-point step whenever Newton leaves the valid half-plane
// (Im m < 0 for Im z > 0).
SpectralSolution solve_m(const SpectrumDims& dims, std::complex<double> z,
                         std::complex<double> init = {1.0, 0.0}, double tol = 1e-10,
                         int max_iter = 200);

// Continuation along the grid: point k starts from solution k-1, the first
// point from m = 1.
std::vector<SpectralSolution> solve_m_grid(const SpectrumDims& dims,
                                           const std::vector<std::complex<double>>& grid);

// The z grid used for bulk-density plots: real parts spaced 0.1 d^{-2a}
// over (0, u_max], imaginary part d^{-2a}.
std::vector<std::complex<double>> default_density_grid(const SpectrumDims& dims,
                                                       double u_max = 1.1);

struct KappaValue {
  double ratio;  // v/d, may be +inf
  double alpha;
  double kappa;
};

// Solves integral_0^{ratio} kappa / (kappa + x^{2a}) dx = 1 by bisection;
// ratio = +inf requires 2a > 1.
KappaValue solve_kappa(double alpha, double ratio);

struct WeightedDensity {
  double trace_density;
  double target_density;
};

// Densities at z = u + i eta (eta defaults to d^{-2a}):
//   trace:  (1/pi) Im[(-v + (1-m) d) / z]
//   target: (1/pi) Im sum_j j^{-2a-2b} / (j^{-2a} m - z)
WeightedDensity weighted_density(const SpectrumDims& dims, double beta, double u,
                                 double eta = -1.0);

// sum_{j<=v} j^{-2a-2b} / (j^{-2a} m - z); the deterministic equivalent of
// <(K-z)^{-1} D^{1/2} b, D^{1/2} b>.
std::complex<double> target_stieltjes(const SpectrumDims& dims, double beta,
                                      std::complex<double> m, std::complex<double> z);

}  // namespace plrf
