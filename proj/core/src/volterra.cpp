#include "plrf/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "plrf/errors.hpp"

namespace plrf {

double contraction_factor(double lambda, double gamma, int64_t batch) {
  const double b = static_cast<double>(batch);
  return 1.0 - 2.0 * gamma * b * lambda + gamma * gamma * b * (b + 1.0) * lambda * lambda;
}

double forcing(const SpectralModes& modes, double gamma, int64_t batch, int64_t r) {
  double s = modes.irreducible;
  for (size_t i = 0; i < modes.lambdas.size(); ++i) {
    s += modes.weights[i] *
         std::pow(contraction_factor(modes.lambdas[i], gamma, batch), static_cast<double>(r));
  }
  return s;
}

double kernel(const SpectralModes& modes, double gamma, int64_t batch, int64_t r) {
  const double b = static_cast<double>(batch);
  double s = 0.0;
  for (double lam : modes.lambdas) {
    s += lam * lam *
         std::pow(contraction_factor(lam, gamma, batch), static_cast<double>(r));
  }
  return gamma * gamma * b * s;
}

double kernel_norm(const SpectralModes& modes, double gamma, int64_t batch) {
  if (gamma == 0.0) return 0.0;
  const double b = static_cast<double>(batch);
  double s = 0.0;
  for (double lam : modes.lambdas) {
    if (std::abs(contraction_factor(lam, gamma, batch)) >= 1.0) {
      throw numeric_error("kernel_norm diverges: |rho| >= 1 at lambda " + std::to_string(lam));
    }
    // gamma^2 B lam^2 / (1 - rho) = gamma lam / (2 - gamma (B+1) lam)
    s += gamma * lam / (2.0 - gamma * (b + 1.0) * lam);
  }
  return s;
}

StabilityReport stability_check(const SpectralModes& modes, double gamma, int64_t batch) {
  const double b = static_cast<double>(batch);
  StabilityReport rep;
  rep.gd_margin = 2.0 - gamma * (b + 1.0) * modes.lambda_max();
  if (rep.gd_margin <= 0.0) {
    rep.norm = std::numeric_limits<double>::infinity();
    rep.stable = false;
    return rep;
  }
  try {
    rep.norm = kernel_norm(modes, gamma, batch);
  } catch (const numeric_error&) {
    rep.norm = std::numeric_limits<double>::infinity();
  }
  rep.stable = rep.norm < 1.0;
  return rep;
}

namespace {

// Shared driver for the O(T d) solve: per mode keep rho^r (forcing) and the
// states S_i(r) = sum_{s<r} rho_i^{r-1-s} X(s) for X = P and X = F.
template <class Emit>
void run_mode_recursion(const SpectralModes& modes, double gamma, int64_t batch,
                        int64_t horizon, bool track_forcing_convolution, const Emit& emit) {
  const size_t n = modes.lambdas.size();
  const double b = static_cast<double>(batch);
  std::vector<double> rho(n), rho_pow(n, 1.0), state_loss(n, 0.0), state_forcing;
  if (track_forcing_convolution) state_forcing.assign(n, 0.0);
  std::vector<double> klam(n);
  for (size_t i = 0; i < n; ++i) {
    rho[i] = contraction_factor(modes.lambdas[i], gamma, batch);
    klam[i] = gamma * gamma * b * modes.lambdas[i] * modes.lambdas[i];
  }
  for (int64_t r = 0; r <= horizon; ++r) {
    double f = modes.irreducible;
    double conv_loss = 0.0;
    double conv_forcing = 0.0;
    for (size_t i = 0; i < n; ++i) {
      f += modes.weights[i] * rho_pow[i];
      conv_loss += klam[i] * state_loss[i];
    }
    if (track_forcing_convolution) {
      for (size_t i = 0; i < n; ++i) conv_forcing += klam[i] * state_forcing[i];
    }
    const double p = f + conv_loss;
    emit(r, p, f, conv_forcing);
    if (r == horizon) break;
    for (size_t i = 0; i < n; ++i) {
      state_loss[i] = rho[i] * state_loss[i] + p;
      rho_pow[i] *= rho[i];
    }
    if (track_forcing_convolution) {
      for (size_t i = 0; i < n; ++i) {
        state_forcing[i] = rho[i] * state_forcing[i] + f;
      }
    }
  }
}

void require_stable(const SpectralModes& modes, double gamma, int64_t batch) {
  const StabilityReport rep = stability_check(modes, gamma, batch);
  if (!rep.stable) {
    throw numeric_error("volterra solve requires stability: gd_margin " +
                        std::to_string(rep.gd_margin) + ", kernel norm " +
                        std::to_string(rep.norm));
  }
}

std::vector<int64_t> checkpoints_with_zero(const CheckpointSchedule& schedule) {
  std::vector<int64_t> iters = schedule.iterations();
  if (iters.empty() || iters.front() != 0) iters.insert(iters.begin(), 0);
  return iters;
}

}  // namespace

LossCurve solve_volterra(const SpectralModes& modes, double gamma, int64_t batch,
                         const CheckpointSchedule& schedule) {
  require_stable(modes, gamma, batch);
  const std::vector<int64_t> iters = checkpoints_with_zero(schedule);
  LossCurve curve;
  curve.source = "volterra";
  curve.d = modes.d;
  const double fpi = static_cast<double>(batch) * static_cast<double>(modes.d);
  size_t next = 0;
  run_mode_recursion(modes, gamma, batch, iters.back(), false,
                     [&](int64_t r, double p, double, double) {
                       if (next < iters.size() && iters[next] == r) {
                         curve.points.push_back({r, static_cast<double>(r) * fpi, p});
                         ++next;
                       }
                     });
  return curve;
}

std::vector<double> solve_volterra_naive(const std::vector<double>& forcing_seq,
                                         const std::vector<double>& kernel_seq) {
  const size_t n = forcing_seq.size();
  std::vector<double> p(n);
  for (size_t r = 0; r < n; ++r) {
    double conv = 0.0;
    for (size_t s = 0; s < r; ++s) conv += kernel_seq[r - 1 - s] * p[s];
    p[r] = forcing_seq[r] + conv;
  }
  return p;
}

LossCurve solve_volterra_naive(const SpectralModes& modes, double gamma, int64_t batch,
                               const CheckpointSchedule& schedule) {
  require_stable(modes, gamma, batch);
  const std::vector<int64_t> iters = checkpoints_with_zero(schedule);
  const int64_t horizon = iters.back();
  std::vector<double> f(horizon + 1), k(horizon + 1);
  for (int64_t r = 0; r <= horizon; ++r) {
    f[r] = forcing(modes, gamma, batch, r);
    k[r] = kernel(modes, gamma, batch, r);
  }
  const std::vector<double> p = solve_volterra_naive(f, k);
  LossCurve curve;
  curve.source = "volterra";
  curve.d = modes.d;
  const double fpi = static_cast<double>(batch) * static_cast<double>(modes.d);
  for (int64_t r : iters) {
    curve.points.push_back({r, static_cast<double>(r) * fpi, p[r]});
  }
  return curve;
}

VolterraTrace solve_volterra_trace(const SpectralModes& modes, double gamma, int64_t batch,
                                   const CheckpointSchedule& schedule) {
  require_stable(modes, gamma, batch);
  const std::vector<int64_t> iters = checkpoints_with_zero(schedule);
  VolterraTrace trace;
  size_t next = 0;
  run_mode_recursion(modes, gamma, batch, iters.back(), true,
                     [&](int64_t r, double p, double f, double kf) {
                       if (next < iters.size() && iters[next] == r) {
                         trace.iters.push_back(r);
                         trace.loss.push_back(p);
                         trace.forcing.push_back(f);
                         trace.convolution.push_back(kf);
                         ++next;
                       }
                     });
  return trace;
}

SandwichGap sandwich_gap(const SpectralModes& modes, double gamma, int64_t batch, int64_t r) {
  if (r < 1) throw config_error("sandwich_gap requires r >= 1");
  CheckpointSchedule sched = CheckpointSchedule::linear(r, 1, r);
  const VolterraTrace trace = solve_volterra_trace(modes, gamma, batch, sched);
  const double f = trace.forcing.back();
  const double kf = trace.convolution.back();
  const double p = trace.loss.back();
  SandwichGap gap;
  gap.lower = f + kf;
  gap.value = p;
  gap.upper_ratio = (p - f) / std::max(1e-300, kf);
  return gap;
}

}  // namespace plrf
