#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plrf {

// Regions of the (alpha, beta) quadrant with distinct loss-curve shapes.
// `Boundary` is returned within tol of a critical line instead of an
// arbitrary tie-break.
enum class PhaseLabel { Ia, Ib, Ic, II, III, IVa, IVb, NoPowerLaw, Boundary };

struct Phase {
  PhaseLabel label;
  std::string boundary_name;  // set when label == Boundary
  bool is_boundary() const { return label == PhaseLabel::Boundary; }
  std::string name() const;
};

Phase classify_phase(double alpha, double beta, double tol = 1e-9);

// Compute-optimal exponents: loss P* ~ f^-eta, parameter count d* ~ f^xi.
struct ExponentPair {
  double eta;
  double xi;
  std::string tradeoff;  // which two components meet at the optimum
};

// Exact per-phase formulas. On a boundary where both sides agree the common
// value is returned; throws config_error for NoPowerLaw or the pentuple
// point.
ExponentPair theory_exponents(double alpha, double beta);

enum class ComponentKind { F0, Fpp, Fac, Kpp };
std::string component_name(ComponentKind kind);

struct TheoryParams {
  double alpha;
  double beta;
  int64_t d;
  uint64_t v;  // 0 = infinite (requires 2 alpha > 1)
  double gamma;
  int64_t batch;
};

// Exact component functions:
//   F0       sum_{j<=v} j^{-2a-2b} / (1 + j^{-2a} d^{2a} kappa)   (r-free)
//   Fpp(r)   (1/2a) int_0^1 u^{(2b-1)/(2a)} exp(-2 gamma B r u) du
//   Fac(r)   (c_b/2a) int_{d^-2a}^1 u^{-1/(2a)} d^-1 exp(-2 gamma B r u) du
//   Kpp(r)   (gamma^2 B/2a) int_0^1 u^{1-1/(2a)} exp(-2 gamma B r u) du
// with c_b = sum_{j<=v} j^{-2b} when 2b > 1 and 0 otherwise (so Fac == 0
// for 2b < 1). Kpp requires a > 1/4.
double component_value(ComponentKind kind, const TheoryParams& params, double r);

struct AsymptoticValue {
  double value;
  bool in_window;  // gamma B r within [M, d^{2a}/M]
};

// Closed-form large-d asymptotics (gamma-function constants included).
AsymptoticValue component_asymptotic(ComponentKind kind, const TheoryParams& params, double r,
                                     double window_m = 50.0);

struct SurrogateValue {
  double value;
  ComponentKind argmax;
};

// max{Fpp, Fac, F0, (1/gamma B) Kpp} over the phase's active components;
// asymptotic forms inside the window, quadrature outside.
SurrogateValue surrogate_loss(const TheoryParams& params, double r, double window_m = 50.0);

// Intersect C0 (f/d)^{-g0} d^{-p0} with C1 (f/d)^{-g1} d^{-p1}: the
// minimizing d and the objective value at a given flops budget f.
struct CornerPoint {
  double d_star;
  double value;
};

CornerPoint corner_tradeoff(double c0, double g0, double p0, double c1, double g1, double p1,
                            double f);

// Phase IV with optimal learning rate: exponents of f in gamma*, d*, and the
// loss. Requires 1/4 < alpha < 1/2 and 2 beta > 1.
struct Phase4Optimum {
  double gamma_exp;
  double xi;
  double eta_exp;  // negative: loss ~ f^{eta_exp}
};

Phase4Optimum optimal_lr_phase4(double alpha, double beta);

// Dominance intervals of the phase's active components in iteration count.
struct CrossoverInterval {
  double r_lo;
  double r_hi;
  ComponentKind dominant;
};

std::vector<CrossoverInterval> crossover_schedule(const TheoryParams& params);

// Gamma function via a Lanczos approximation (g = 7, 9 coefficients).
double lanczos_gamma(double x);

// sum_{j<=v} j^{-2 beta} when 2 beta > 1 (zeta tail correction when v = 0,
// i.e. infinite), else 0.
double c_beta(double beta, uint64_t v);

}  // namespace plrf
