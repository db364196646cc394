#pragma once

#include <complex>
#include <functional>

namespace plrf {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 48;
};

// Adaptive Gauss-Kronrod (G7, K15) with interval bisection.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, const QuadratureOptions& opt = {});

// integral_a^b u^p g(u) du with p in (-1, 0); substitutes u = s^{1/(1+p)}
// so the endpoint singularity at 0 disappears. Requires 0 <= a < b.
double integrate_power_singular(const std::function<double(double)>& g, double p, double a,
                                double b, const QuadratureOptions& opt = {});

}  // namespace plrf
