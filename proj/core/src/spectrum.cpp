#include "plrf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "plrf/errors.hpp"
#include "plrf/quadrature.hpp"

namespace plrf {

namespace {

using cplx = std::complex<double>;

// sum_{j<=v} j^{-2a} m / (j^{-2a} m - z) and its m-derivative
// sum_j j^{-2a} (-z) / (j^{-2a} m - z)^2. The head is summed exactly; the
// tail j in (J, v] is a smooth function of j and is replaced by the midpoint
// integral over [J + 1/2, v + 1/2].
struct ResolventSum {
  cplx value;
  cplx deriv;
};

// Compensated (Kahan) accumulator: the resolvent sums cancel heavily near
// the bulk, and plain summation would cap the attainable residual well above
// the Newton tolerance.
struct KahanSum {
  cplx sum{0.0, 0.0};
  cplx carry{0.0, 0.0};
  void add(cplx x) {
    const cplx y = x - carry;
    const cplx t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

ResolventSum resolvent_sum(const SpectrumDims& dims, cplx m, cplx z) {
  const double a2 = 2.0 * dims.alpha;
  const uint64_t head = std::min<uint64_t>(dims.v, dims.head_terms);
  KahanSum s_acc, ds_acc;
  for (uint64_t j = 1; j <= head; ++j) {
    const double lam = std::pow(static_cast<double>(j), -a2);
    const cplx denom = lam * m - z;
    s_acc.add(lam * m / denom);
    ds_acc.add(lam * (-z) / (denom * denom));
  }
  cplx s = s_acc.sum, ds = ds_acc.sum;
  if (dims.v > head) {
    // g(x) = m / (m - z x^{2a}); integrate over [J+1/2, v+1/2] in log space.
    const double x0 = static_cast<double>(head) + 0.5;
    const double x1 = static_cast<double>(dims.v) + 0.5;
    QuadratureOptions opt;
    opt.abs_tol = 1e-14 * (1.0 + std::abs(s));
    opt.rel_tol = 1e-12;
    s += integrate_complex(
        [&](double t) {
          const double x = std::exp(t);
          return x * m / (m - z * std::pow(x, a2));
        },
        std::log(x0), std::log(x1), opt);
    ds += integrate_complex(
        [&](double t) {
          const double x = std::exp(t);
          const cplx denom = m - z * std::pow(x, a2);
          return x * (-z * std::pow(x, a2)) / (denom * denom);
        },
        std::log(x0), std::log(x1), opt);
  }
  return {s, ds};
}

}  // namespace

cplx target_stieltjes(const SpectrumDims& dims, double beta, cplx m, cplx z) {
  const double a2 = 2.0 * dims.alpha;
  const double b2 = 2.0 * beta;
  const uint64_t head = std::min<uint64_t>(dims.v, dims.head_terms);
  KahanSum acc;
  for (uint64_t j = 1; j <= head; ++j) {
    const double jd = static_cast<double>(j);
    acc.add(std::pow(jd, -a2 - b2) / (std::pow(jd, -a2) * m - z));
  }
  cplx s = acc.sum;
  if (dims.v > head) {
    const double x0 = static_cast<double>(head) + 0.5;
    const double x1 = static_cast<double>(dims.v) + 0.5;
    QuadratureOptions opt;
    opt.abs_tol = 1e-14 * (1.0 + std::abs(s));
    opt.rel_tol = 1e-12;
    s += integrate_complex(
        [&](double t) {
          const double x = std::exp(t);
          // x^{-2a-2b} / (x^{-2a} m - z) = x^{-2b} / (m - z x^{2a})
          return x * std::pow(x, -b2) / (m - z * std::pow(x, a2));
        },
        std::log(x0), std::log(x1), opt);
  }
  return s;
}

SpectralSolution solve_m(const SpectrumDims& dims, cplx z, cplx init, double tol, int max_iter) {
  if (!(dims.alpha > 0.0) || dims.d < 1 || dims.v <= static_cast<uint64_t>(dims.d)) {
    throw config_error("solve_m: invalid dimensions");
  }
  const bool upper_half = z.imag() > 0.0;
  const double d = static_cast<double>(dims.d);
  cplx m = init;
  if (upper_half && m.imag() > 0.0) m = std::conj(m);
  double resid = std::numeric_limits<double>::infinity();
  double resid_prev = resid;
  // Newton runs past the contract tolerance down to the fp floor (the extra
  // steps are nearly free and keep the final step deep in the quadratic
  // regime); a stalled residual below `tol` still counts as converged.
  const double target = std::min(tol, 1e-13);
  for (int it = 1; it <= max_iter; ++it) {
    const ResolventSum s = resolvent_sum(dims, m, z);
    const cplx f = m + s.value / d - 1.0;
    const bool stalled = std::abs(f) >= 0.5 * resid;
    resid_prev = resid;
    resid = std::abs(f);
    if (resid <= target || (resid <= tol && stalled)) {
      if (upper_half && m.imag() >= 0.0) {
        // Converged to the wrong branch; restart from the contraction map.
        m = cplx{1.0, -1e-12};
        resid = std::numeric_limits<double>::infinity();
        continue;
      }
      return {z, m, resid, resid_prev, it};
    }
    const cplx df = 1.0 + s.deriv / d;
    cplx next = m - f / df;
    if (upper_half && next.imag() >= 0.0) {
      // Damped fixed point of the contraction map m -> d m / (d m + S).
      const cplx g = d * m / (d * m + s.value);
      next = 0.5 * m + 0.5 * g;
      if (next.imag() >= 0.0) next = cplx{next.real(), -std::abs(next.imag()) - 1e-300};
    }
    m = next;
  }
  throw numeric_error("solve_m: no convergence after " + std::to_string(max_iter) +
                      " iterations, residual " + std::to_string(resid));
}

std::vector<SpectralSolution> solve_m_grid(const SpectrumDims& dims,
                                           const std::vector<cplx>& grid) {
  std::vector<SpectralSolution> out;
  out.reserve(grid.size());
  cplx init{1.0, 0.0};
  for (size_t k = 0; k < grid.size(); ++k) {
    try {
      out.push_back(solve_m(dims, grid[k], init));
    } catch (const numeric_error& e) {
      throw numeric_error("solve_m_grid: failure at index " + std::to_string(k) + ": " +
                          e.what());
    }
    init = out.back().m;
  }
  return out;
}

std::vector<cplx> default_density_grid(const SpectrumDims& dims, double u_max) {
  const double eta = std::pow(static_cast<double>(dims.d), -2.0 * dims.alpha);
  const double du = 0.1 * eta;
  std::vector<cplx> grid;
  for (double u = du; u <= u_max; u += du) grid.emplace_back(u, eta);
  return grid;
}

KappaValue solve_kappa(double alpha, double ratio) {
  if (!(alpha > 0.0)) throw config_error("solve_kappa: alpha must be positive");
  const bool infinite = std::isinf(ratio);
  if (!infinite && !(ratio > 1.0)) throw config_error("solve_kappa: ratio must exceed 1");
  if (infinite && !(2.0 * alpha > 1.0)) {
    throw config_error("kappa requires 2a>1 at infinite aspect");
  }
  const double a2 = 2.0 * alpha;
  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  auto lhs = [&](double kappa) {
    if (!infinite) {
      return integrate([&](double x) { return kappa / (kappa + std::pow(x, a2)); }, 0.0, ratio,
                       opt);
    }
    // x = kappa^{1/(2a)} t turns the integral into kappa^{1/(2a)} * c_a with
    // c_a = integral_0^inf dt/(1+t^{2a}); truncate where the tail is < 1e-13.
    const double tail_cut = std::pow(1e-13 * (a2 - 1.0), 1.0 / (1.0 - a2));
    const double c_a = integrate([&](double t) { return 1.0 / (1.0 + std::pow(t, a2)); }, 0.0,
                                 tail_cut, opt) +
                       std::pow(tail_cut, 1.0 - a2) / (a2 - 1.0);
    return std::pow(kappa, 1.0 / a2) * c_a;
  };
  double lo = 1e-12, hi = 1.0;
  while (lhs(hi) < 1.0) {
    hi *= 2.0;
    if (hi > 1e18) throw numeric_error("solve_kappa: failed to bracket");
  }
  while (lhs(lo) > 1.0) lo *= 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-12 * hi) break;
  }
  const double kappa = 0.5 * (lo + hi);
  if (std::abs(lhs(kappa) - 1.0) > 1e-10) {
    throw numeric_error("solve_kappa: defining equation not met to 1e-10");
  }
  return {ratio, alpha, kappa};
}

WeightedDensity weighted_density(const SpectrumDims& dims, double beta, double u, double eta) {
  if (!(u > 0.0)) throw config_error("weighted_density: u must be positive");
  if (eta <= 0.0) eta = std::pow(static_cast<double>(dims.d), -2.0 * dims.alpha);
  const cplx z{u, eta};
  const SpectralSolution sol = solve_m(dims, z);
  const double d = static_cast<double>(dims.d);
  const double v = static_cast<double>(dims.v);
  const cplx trace = (-v + (1.0 - sol.m) * d) / z;
  const cplx target = target_stieltjes(dims, beta, sol.m, z);
  constexpr double inv_pi = 0.31830988618379067154;
  return {inv_pi * trace.imag(), inv_pi * target.imag()};
}

}  // namespace plrf
