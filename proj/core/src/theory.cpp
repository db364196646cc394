#include "plrf/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "plrf/errors.hpp"
#include "plrf/quadrature.hpp"
#include "plrf/spectrum.hpp"

namespace plrf {

namespace {
constexpr double kAlphaIVSplit = 0.29289321881345247560;  // 1 - 1/sqrt(2)
}

std::string Phase::name() const {
  switch (label) {
    case PhaseLabel::Ia: return "Ia";
    case PhaseLabel::Ib: return "Ib";
    case PhaseLabel::Ic: return "Ic";
    case PhaseLabel::II: return "II";
    case PhaseLabel::III: return "III";
    case PhaseLabel::IVa: return "IVa";
    case PhaseLabel::IVb: return "IVb";
    case PhaseLabel::NoPowerLaw: return "NoPowerLaw";
    case PhaseLabel::Boundary: return "Boundary(" + boundary_name + ")";
  }
  return "?";
}

std::string component_name(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::F0: return "F0";
    case ComponentKind::Fpp: return "Fpp";
    case ComponentKind::Fac: return "Fac";
    case ComponentKind::Kpp: return "Kpp";
  }
  return "?";
}

Phase classify_phase(double alpha, double beta, double tol) {
  if (!(alpha > 0.0)) throw config_error("classify_phase: alpha must be positive");
  auto near = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  if (near(alpha, 0.5) && near(beta, 0.5)) return {PhaseLabel::Boundary, "pentuple"};
  if (near(alpha + beta, 0.5)) return {PhaseLabel::Boundary, "alpha+beta=1/2"};
  if (near(alpha, 0.5)) return {PhaseLabel::Boundary, "2alpha=1"};
  if (near(beta, 0.5)) return {PhaseLabel::Boundary, "2beta=1"};
  if (alpha + beta < 0.5) return {PhaseLabel::NoPowerLaw, ""};
  if (beta < 0.5) {
    // capacity-constrained band
    return alpha > 0.5 ? Phase{PhaseLabel::Ia, ""} : Phase{PhaseLabel::Ib, ""};
  }
  // 2 beta > 1 from here on
  if (alpha > 0.5) {
    if (near(beta, alpha)) return {PhaseLabel::Boundary, "beta=alpha"};
    return beta < alpha ? Phase{PhaseLabel::II, ""} : Phase{PhaseLabel::III, ""};
  }
  if (near(alpha, 0.25)) return {PhaseLabel::Boundary, "alpha=1/4"};
  if (near(alpha, kAlphaIVSplit)) return {PhaseLabel::Boundary, "alpha=1-1/sqrt2"};
  if (alpha < 0.25) return {PhaseLabel::Ic, ""};
  if (alpha < kAlphaIVSplit) return {PhaseLabel::IVb, ""};
  return {PhaseLabel::IVa, ""};
}

namespace {

ExponentPair exponents_in_phase(PhaseLabel label, double alpha, double beta) {
  const double a = alpha, b = beta;
  switch (label) {
    case PhaseLabel::Ia: {
      const double xi = 1.0 / (2.0 * a + 1.0);
      return {(1.0 - xi) * (1.0 + b / a - 1.0 / (2.0 * a)), xi, "Fpp=F0"};
    }
    case PhaseLabel::Ib:
      return {a + b - 0.5, 0.5, "Fpp=F0"};
    case PhaseLabel::Ic: {
      const double denom = a * (2.0 * b - 3.0) - 2.0 * b + 1.0;
      return {-a * (2.0 * a + 2.0 * b - 1.0) / denom,
              (1.0 - 2.0 * (a + b)) / (2.0 * denom), "Fpp=F0"};
    }
    case PhaseLabel::II:
      return {(2.0 * a + 2.0 * b - 1.0) / (2.0 * (a + b)), b / (a + b), "Fpp=Fac"};
    case PhaseLabel::III:
      return {(4.0 * a - 1.0) / (4.0 * a), 0.5, "Kpp=Fac"};
    case PhaseLabel::IVa:
      return {a, 0.5, "Kpp=F0"};
    case PhaseLabel::IVb: {
      const double denom = 2.0 * a * b + a - 2.0 * b;
      return {-(1.0 - 2.0 * a) * (2.0 * a + 2.0 * b - 1.0) / (2.0 * denom),
              (a - b) / denom, "Kpp=Fpp"};
    }
    default:
      throw config_error("theory_exponents: not a power-law phase");
  }
}

}  // namespace

ExponentPair theory_exponents(double alpha, double beta) {
  const Phase phase = classify_phase(alpha, beta);
  if (phase.label == PhaseLabel::NoPowerLaw) {
    throw config_error("theory_exponents: no power law at alpha+beta < 1/2");
  }
  if (!phase.is_boundary()) return exponents_in_phase(phase.label, alpha, beta);
  if (phase.boundary_name == "pentuple" || phase.boundary_name == "alpha+beta=1/2") {
    throw config_error("theory_exponents: undefined on " + phase.boundary_name);
  }
  // Probe both sides of the line; return the shared value if it is continuous
  // there.
  const double h = 1e-6;
  double a1 = alpha, a2 = alpha, b1 = beta, b2 = beta;
  if (phase.boundary_name == "2beta=1") {
    b1 -= h;
    b2 += h;
  } else if (phase.boundary_name == "beta=alpha") {
    b1 = alpha - h;
    b2 = alpha + h;
  } else {
    a1 -= h;
    a2 += h;
  }
  const Phase p1 = classify_phase(a1, b1), p2 = classify_phase(a2, b2);
  if (p1.is_boundary() || p2.is_boundary() || p1.label == PhaseLabel::NoPowerLaw ||
      p2.label == PhaseLabel::NoPowerLaw) {
    throw config_error("theory_exponents: ambiguous boundary at " + phase.boundary_name);
  }
  const ExponentPair e1 = exponents_in_phase(p1.label, a1, b1);
  const ExponentPair e2 = exponents_in_phase(p2.label, a2, b2);
  if (std::abs(e1.eta - e2.eta) > 100.0 * h || std::abs(e1.xi - e2.xi) > 100.0 * h) {
    throw config_error("theory_exponents: discontinuous across " + phase.boundary_name +
                       " (xi " + std::to_string(e1.xi) + " vs " + std::to_string(e2.xi) + ")");
  }
  return {0.5 * (e1.eta + e2.eta), 0.5 * (e1.xi + e2.xi), "boundary:" + phase.boundary_name};
}

double lanczos_gamma(double x) {
  // g = 7, 9-term coefficients.
  static const double kCoef[9] = {0.99999999999980993,  676.5203681218851,
                                  -1259.1392167224028,  771.32342877765313,
                                  -176.61502916214059,  12.507343278686905,
                                  -0.13857109526572012, 9.9843695780195716e-6,
                                  1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return M_PI / (std::sin(M_PI * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double acc = kCoef[0];
  for (int i = 1; i < 9; ++i) acc += kCoef[i] / (x + i);
  const double t = x + 7.5;
  return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

double c_beta(double beta, uint64_t v) {
  if (!(2.0 * beta > 1.0)) return 0.0;
  const double s = 2.0 * beta;
  const uint64_t head = (v == 0) ? 1000000 : std::min<uint64_t>(v, 1000000);
  double sum = 0.0;
  for (uint64_t j = 1; j <= head; ++j) sum += std::pow(static_cast<double>(j), -s);
  if (v == 0 || v > head) {
    const double x0 = static_cast<double>(head) + 0.5;
    const double x1 = (v == 0) ? std::numeric_limits<double>::infinity()
                               : static_cast<double>(v) + 0.5;
    // midpoint tail integral of x^-s
    const double upper = std::isinf(x1) ? 0.0 : std::pow(x1, 1.0 - s) / (s - 1.0);
    sum += std::pow(x0, 1.0 - s) / (s - 1.0) - upper;
  }
  return sum;
}

namespace {

double ratio_of(const TheoryParams& p) {
  if (p.v == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(p.v) / static_cast<double>(p.d);
}

// integral_a^1 u^p exp(-c u) du via the log substitution (valid for a > 0
// and any p).
double exp_weighted_integral_from(double p, double c, double a) {
  QuadratureOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 0.0;
  return integrate(
      [&](double t) {
        const double u = std::exp(t);
        return std::exp(t * (p + 1.0) - c * u);
      },
      std::log(a), 0.0, opt);
}

// integral_0^1 u^p exp(-c u) du for p > -1.
double exp_weighted_integral(double p, double c) {
  QuadratureOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 0.0;
  if (p >= 0.0) {
    return integrate([&](double u) { return std::pow(u, p) * std::exp(-c * u); }, 0.0, 1.0,
                     opt);
  }
  return integrate_power_singular([&](double u) { return std::exp(-c * u); }, p, 0.0, 1.0,
                                  opt);
}

double f0_value(const TheoryParams& p) {
  const double a2 = 2.0 * p.alpha;
  const double kappa = solve_kappa(p.alpha, ratio_of(p)).kappa;
  const double scale = std::pow(static_cast<double>(p.d), a2) * kappa;
  const double s = a2 + 2.0 * p.beta;
  const uint64_t head = (p.v == 0) ? 1000000 : std::min<uint64_t>(p.v, 1000000);
  double sum = 0.0;
  for (uint64_t j = 1; j <= head; ++j) {
    const double jd = static_cast<double>(j);
    sum += std::pow(jd, -s) / (1.0 + std::pow(jd, -a2) * scale);
  }
  if (p.v == 0 || p.v > head) {
    if (!(s > 1.0)) throw config_error("F0 sum diverges: 2(alpha+beta) <= 1");
    const double x0 = static_cast<double>(head) + 0.5;
    const double x1 = (p.v == 0) ? std::pow(1e-16 * (s - 1.0) * std::max(sum, 1e-300),
                                            1.0 / (1.0 - s))
                                 : static_cast<double>(p.v) + 0.5;
    if (x1 > x0) {
      sum += integrate(
          [&](double t) {
            const double x = std::exp(t);
            return x * std::pow(x, -s) / (1.0 + std::pow(x, -a2) * scale);
          },
          std::log(x0), std::log(x1));
    }
  }
  return sum;
}

}  // namespace

double component_value(ComponentKind kind, const TheoryParams& p, double r) {
  if (!(p.alpha > 0.0)) throw config_error("component_value: alpha must be positive");
  const double a2 = 2.0 * p.alpha;
  const double c = 2.0 * p.gamma * static_cast<double>(p.batch) * r;
  switch (kind) {
    case ComponentKind::F0:
      return f0_value(p);
    case ComponentKind::Fpp: {
      const double pw = (2.0 * p.beta - 1.0) / a2;
      if (!(pw > -1.0)) throw config_error("Fpp diverges: 2(alpha+beta) <= 1");
      return exp_weighted_integral(pw, c) / a2;
    }
    case ComponentKind::Fac: {
      const double cb = c_beta(p.beta, p.v);
      if (cb == 0.0) return 0.0;
      const double lower = std::pow(static_cast<double>(p.d), -a2);
      return cb / (a2 * static_cast<double>(p.d)) *
             exp_weighted_integral_from(-1.0 / a2, c, lower);
    }
    case ComponentKind::Kpp: {
      if (!(p.alpha > 0.25)) throw config_error("Kpp requires alpha > 1/4");
      const double pw = 1.0 - 1.0 / a2;
      return p.gamma * p.gamma * static_cast<double>(p.batch) / a2 *
             exp_weighted_integral(pw, c);
    }
  }
  throw config_error("component_value: unknown kind");
}

AsymptoticValue component_asymptotic(ComponentKind kind, const TheoryParams& p, double r,
                                     double window_m) {
  const double a2 = 2.0 * p.alpha;
  const double gbr = p.gamma * static_cast<double>(p.batch) * r;
  const double d2a = std::pow(static_cast<double>(p.d), a2);
  const bool in_window = gbr >= window_m && gbr <= d2a / window_m;
  const double two_gb = 2.0 * p.gamma * static_cast<double>(p.batch);
  switch (kind) {
    case ComponentKind::F0: {
      const double kappa = solve_kappa(p.alpha, ratio_of(p)).kappa;
      if (2.0 * p.beta > 1.0) {
        return {c_beta(p.beta, p.v) / (kappa * d2a), true};
      }
      const double ratio = ratio_of(p);
      const double s = a2 + 2.0 * p.beta;
      if (std::isinf(ratio) && !(s > 1.0)) {
        throw config_error("F0 asymptotic diverges: 2(alpha+beta) <= 1 at infinite aspect");
      }
      const double upper = std::isinf(ratio) ? 1e6 : ratio;
      double integral = integrate_power_singular(
          [&](double u) { return 1.0 / (kappa + std::pow(u, a2)); }, -2.0 * p.beta, 0.0, upper);
      if (std::isinf(ratio)) integral += std::pow(upper, 1.0 - s) / (s - 1.0);
      return {std::pow(static_cast<double>(p.d), 1.0 - a2 - 2.0 * p.beta) * integral, true};
    }
    case ComponentKind::Fpp: {
      const double arg = p.beta / p.alpha - 1.0 / a2 + 1.0;
      if (!(arg > 0.0)) throw config_error("Fpp asymptotic: 2(alpha+beta) <= 1");
      const double expo = -(1.0 + p.beta / p.alpha) + 1.0 / a2;
      return {lanczos_gamma(arg) / a2 * std::pow(two_gb, expo) * std::pow(r, expo), in_window};
    }
    case ComponentKind::Fac: {
      if (!(2.0 * p.beta > 1.0)) return {0.0, in_window};
      if (!(a2 > 1.0)) throw config_error("Fac asymptotic requires 2alpha > 1");
      const double expo = -1.0 + 1.0 / a2;
      return {c_beta(p.beta, p.v) * lanczos_gamma(1.0 - 1.0 / a2) / a2 *
                  std::pow(two_gb, expo) * std::pow(r, expo) / static_cast<double>(p.d),
              in_window};
    }
    case ComponentKind::Kpp: {
      if (!(p.alpha > 0.25)) throw config_error("Kpp asymptotic requires alpha > 1/4");
      const double expo = -2.0 + 1.0 / a2;
      return {p.gamma * p.gamma * static_cast<double>(p.batch) * lanczos_gamma(2.0 - 1.0 / a2) /
                  a2 * std::pow(two_gb, expo) * std::pow(r, expo),
              in_window};
    }
  }
  throw config_error("component_asymptotic: unknown kind");
}

namespace {

std::vector<ComponentKind> active_kinds_in(PhaseLabel label) {
  switch (label) {
    case PhaseLabel::Ia:
    case PhaseLabel::Ib:
    case PhaseLabel::Ic:
      return {ComponentKind::Fpp, ComponentKind::F0};
    case PhaseLabel::II:
      return {ComponentKind::Fpp, ComponentKind::Fac, ComponentKind::F0};
    case PhaseLabel::III:
      return {ComponentKind::Kpp, ComponentKind::Fac, ComponentKind::F0};
    case PhaseLabel::IVa:
    case PhaseLabel::IVb:
      return {ComponentKind::Fpp, ComponentKind::Kpp, ComponentKind::F0};
    default:
      throw config_error("no active components outside the power-law phases");
  }
}

std::vector<ComponentKind> active_kinds(double alpha, double beta) {
  const Phase phase = classify_phase(alpha, beta);
  if (!phase.is_boundary()) return active_kinds_in(phase.label);
  if (phase.boundary_name == "pentuple" || phase.boundary_name == "alpha+beta=1/2") {
    throw config_error("surrogate undefined on " + phase.boundary_name);
  }
  const double h = 1e-6;
  double a1 = alpha, a2 = alpha, b1 = beta, b2 = beta;
  if (phase.boundary_name == "2beta=1") {
    b1 -= h;
    b2 += h;
  } else if (phase.boundary_name == "beta=alpha") {
    b1 -= h;
    b2 += h;
  } else {
    a1 -= h;
    a2 += h;
  }
  std::vector<ComponentKind> merged;
  for (const auto [aa, bb] : {std::pair{a1, b1}, std::pair{a2, b2}}) {
    const Phase side = classify_phase(aa, bb);
    if (side.is_boundary() || side.label == PhaseLabel::NoPowerLaw) continue;
    for (ComponentKind k : active_kinds_in(side.label)) {
      if (std::find(merged.begin(), merged.end(), k) == merged.end()) merged.push_back(k);
    }
  }
  if (merged.empty()) throw config_error("surrogate undefined near " + phase.boundary_name);
  return merged;
}

double evaluate_kind(ComponentKind kind, const TheoryParams& p, double r, double window_m) {
  double value;
  bool use_asymptotic = false;
  if (kind != ComponentKind::F0) {
    const double gbr = p.gamma * static_cast<double>(p.batch) * r;
    const double d2a = std::pow(static_cast<double>(p.d), 2.0 * p.alpha);
    use_asymptotic = gbr >= window_m && gbr <= d2a / window_m;
    if (kind == ComponentKind::Fac && !(p.alpha > 0.5)) use_asymptotic = false;
  }
  value = use_asymptotic ? component_asymptotic(kind, p, r, window_m).value
                         : component_value(kind, p, r);
  if (kind == ComponentKind::Kpp) {
    value /= p.gamma * static_cast<double>(p.batch);  // the SGD-noise term is Kpp/(gamma B)
  }
  return value;
}

}  // namespace

SurrogateValue surrogate_loss(const TheoryParams& p, double r, double window_m) {
  const std::vector<ComponentKind> kinds = active_kinds(p.alpha, p.beta);
  SurrogateValue best{-std::numeric_limits<double>::infinity(), ComponentKind::F0};
  for (ComponentKind kind : kinds) {
    const double val = evaluate_kind(kind, p, r, window_m);
    if (val > best.value) best = {val, kind};
  }
  return best;
}

CornerPoint corner_tradeoff(double c0, double g0, double p0, double c1, double g1, double p1,
                            double f) {
  const double denom = g1 - p1 - g0 + p0;
  if (denom == 0.0) throw config_error("corner_tradeoff: equal effective slopes");
  const double d_star = std::pow(c0 / c1, 1.0 / denom) * std::pow(f, (g1 - g0) / denom);
  const double value = c0 * std::pow(f, -g0) * std::pow(d_star, g0 - p0);
  return {d_star, value};
}

Phase4Optimum optimal_lr_phase4(double alpha, double beta) {
  if (!(alpha > 0.25 && alpha < 0.5 && 2.0 * beta > 1.0)) {
    throw config_error("optimal_lr_phase4 requires 1/4 < alpha < 1/2 and 2 beta > 1");
  }
  const double denom = 4.0 * alpha * beta + 2.0 * alpha + 2.0 * beta - 1.0;
  const double rho = 2.0 * alpha + 2.0 * beta - 1.0;
  return {4.0 * alpha * (alpha - beta) / denom, rho / denom, -2.0 * alpha * rho / denom};
}

std::vector<CrossoverInterval> crossover_schedule(const TheoryParams& p) {
  const std::vector<ComponentKind> kinds = active_kinds(p.alpha, p.beta);
  const double gb = p.gamma * static_cast<double>(p.batch);
  const double r_lo = 1.0;
  const double r_hi = 10.0 * std::pow(static_cast<double>(p.d), 2.0 * p.alpha) / std::max(gb, 1e-12);
  auto eval = [&](ComponentKind k, double r) { return evaluate_kind(k, p, r, 50.0); };

  const int grid_n = 400;
  std::vector<CrossoverInterval> intervals;
  ComponentKind prev = kinds.front();
  double prev_best = -1.0;
  double seg_start = r_lo;
  double prev_r = r_lo;
  for (int i = 0; i <= grid_n; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / grid_n);
    ComponentKind argmax = kinds.front();
    double best = -std::numeric_limits<double>::infinity();
    for (ComponentKind k : kinds) {
      const double val = eval(k, r);
      if (val > best) {
        best = val;
        argmax = k;
      }
    }
    if (i == 0) {
      prev = argmax;
      prev_best = best;
      (void)prev_best;
    } else if (argmax != prev) {
      // refine the switch point in log r
      double lo = prev_r, hi = r;
      for (int it = 0; it < 80; ++it) {
        const double mid = std::sqrt(lo * hi);
        const double diff = eval(prev, mid) - eval(argmax, mid);
        if (diff >= 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double split = std::sqrt(lo * hi);
      intervals.push_back({seg_start, split, prev});
      seg_start = split;
      prev = argmax;
    }
    prev_r = r;
  }
  intervals.push_back({seg_start, r_hi, prev});
  return intervals;
}

}  // namespace plrf
