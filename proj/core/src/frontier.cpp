#include "plrf/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "plrf/errors.hpp"

namespace plrf {

FrontierFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw config_error("fit_power_law needs at least 3 points");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw config_error("fit_power_law needs positive data");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  FrontierFit fit;
  fit.n_slices = static_cast<int>(points.size());
  if (sxx == 0.0) throw config_error("fit_power_law: degenerate abscissae");
  fit.b = sxy / sxx;
  fit.a = std::exp(my - fit.b * mx);
  double ss = 0;
  for (const auto& [x, y] : points) {
    const double resid = std::log(y) - (std::log(fit.a) + fit.b * std::log(x));
    ss += resid * resid;
  }
  fit.residual = std::sqrt(ss / n);
  fit.window = {points.front().first, points.back().first};
  return fit;
}

LogLogInterp::LogLogInterp(const LossCurve& curve) {
  for (const CurvePoint& p : curve.points) {
    if (p.iter <= 0) continue;  // log-log needs positive flops
    if (!(p.risk > 0.0)) throw config_error("curve has non-positive risk");
    lx_.push_back(std::log(p.flops));
    ly_.push_back(std::log(p.risk));
  }
  const size_t n = lx_.size();
  if (n < 2) throw config_error("curve has fewer than 2 usable points");
  // Fritsch-Carlson monotone slopes.
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = lx_[i + 1] - lx_[i];
    if (!(h[i] > 0.0)) throw config_error("curve iterations not strictly increasing");
    delta[i] = (ly_[i + 1] - ly_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
}

double LogLogInterp::log_risk(double log_flops) const {
  if (!covers(log_flops)) throw config_error("interpolation outside curve range");
  const auto it = std::upper_bound(lx_.begin(), lx_.end(), log_flops);
  size_t i = static_cast<size_t>(std::max<ptrdiff_t>(it - lx_.begin() - 1, 0));
  if (i >= lx_.size() - 1) i = lx_.size() - 2;
  const double h = lx_[i + 1] - lx_[i];
  const double t = (log_flops - lx_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * ly_[i] + h10 * h * slope_[i] + h01 * ly_[i + 1] + h11 * h * slope_[i + 1];
}

double LogLogInterp::slope(double log_flops) const {
  if (!covers(log_flops)) throw config_error("interpolation outside curve range");
  const auto it = std::upper_bound(lx_.begin(), lx_.end(), log_flops);
  size_t i = static_cast<size_t>(std::max<ptrdiff_t>(it - lx_.begin() - 1, 0));
  if (i >= lx_.size() - 1) i = lx_.size() - 2;
  const double h = lx_[i + 1] - lx_[i];
  const double t = (log_flops - lx_[i]) / h;
  const double dh00 = (6 * t * t - 6 * t) / h, dh10 = (3 * t * t - 4 * t + 1);
  const double dh01 = (-6 * t * t + 6 * t) / h, dh11 = (3 * t * t - 2 * t);
  return dh00 * ly_[i] + dh10 * slope_[i] + dh01 * ly_[i + 1] + dh11 * slope_[i + 1];
}

std::vector<IsoFlopSlice> isoflop_slices(const std::vector<LossCurve>& curves,
                                         std::pair<double, double> window, int n) {
  if (curves.size() < 2) throw config_error("isoflop_slices needs at least 2 curves");
  if (!(window.first > 0.0) || !(window.second >= window.first)) {
    throw config_error("isoflop_slices: invalid window");
  }
  if (n < 1) throw config_error("isoflop_slices: need n >= 1");
  std::map<int64_t, LogLogInterp> by_d;
  for (const LossCurve& c : curves) {
    if (by_d.count(c.d)) throw config_error("duplicate curve for d " + std::to_string(c.d));
    by_d.emplace(c.d, LogLogInterp(c));
  }
  if (by_d.size() < 2) throw config_error("isoflop_slices needs at least 2 distinct d");
  std::vector<IsoFlopSlice> slices;
  for (int k = 0; k < n; ++k) {
    const double f =
        n == 1 ? window.first
               : window.first * std::pow(window.second / window.first,
                                         static_cast<double>(k) / (n - 1));
    const double lf = std::log(f);
    IsoFlopSlice slice;
    slice.flops = f;
    slice.min_d = 0;
    slice.min_risk = std::numeric_limits<double>::infinity();
    for (const auto& [d, interp] : by_d) {
      if (!interp.covers(lf)) continue;  // extrapolation forbidden
      const double risk = std::exp(interp.log_risk(lf));
      slice.losses.emplace_back(d, risk);
      if (risk < slice.min_risk) {
        slice.min_risk = risk;
        slice.min_d = d;
      }
    }
    if (slice.losses.empty()) {
      throw config_error("isoflop window outside the data at flops " + std::to_string(f));
    }
    slices.push_back(std::move(slice));
  }
  return slices;
}

FrontierFit approach1_xi(const std::vector<IsoFlopSlice>& slices) {
  std::vector<std::pair<double, double>> pts;
  for (const IsoFlopSlice& s : slices) {
    pts.emplace_back(s.flops, static_cast<double>(s.min_d));
  }
  FrontierFit fit = fit_power_law(pts);
  bool all_same = true;
  for (const IsoFlopSlice& s : slices) {
    if (s.min_d != slices.front().min_d) all_same = false;
  }
  fit.low_information = all_same;
  return fit;
}

FrontierFit frontier_eta(const std::vector<IsoFlopSlice>& slices) {
  std::vector<std::pair<double, double>> pts;
  for (const IsoFlopSlice& s : slices) pts.emplace_back(s.flops, s.min_risk);
  return fit_power_law(pts);
}

Approach2Result approach2(const std::vector<LossCurve>& curves,
                          const std::vector<IsoFlopSlice>& slices) {
  (void)curves;
  Approach2Result out;
  std::vector<std::pair<double, double>> pts;
  for (const IsoFlopSlice& s : slices) {
    if (s.losses.size() < 4) {
      throw config_error("approach2 needs >= 4 distinct d per slice");
    }
    // quadratic least squares: log P = a x^2 + b x + c with x = log d
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, t0 = 0, t1 = 0, t2 = 0;
    for (const auto& [d, risk] : s.losses) {
      const double x = std::log(static_cast<double>(d));
      const double y = std::log(risk);
      const double x2 = x * x;
      s0 += 1;
      s1 += x;
      s2 += x2;
      s3 += x2 * x;
      s4 += x2 * x2;
      t0 += y;
      t1 += x * y;
      t2 += x2 * y;
    }
    // solve the 3x3 normal equations by Cramer's rule
    const double det = s4 * (s2 * s0 - s1 * s1) - s3 * (s3 * s0 - s1 * s2) +
                       s2 * (s3 * s1 - s2 * s2);
    if (det == 0.0) throw config_error("approach2: singular normal equations");
    const double a = (t2 * (s2 * s0 - s1 * s1) - s3 * (t1 * s0 - t0 * s1) +
                      s2 * (t1 * s1 - t0 * s2)) /
                     det;
    const double b = (s4 * (t1 * s0 - t0 * s1) - t2 * (s3 * s0 - s1 * s2) +
                      s2 * (s3 * t0 - s2 * t1)) /
                     det;
    double d_star;
    if (a > 0.0) {
      d_star = std::exp(-b / (2.0 * a));
    } else {
      ++out.convex_failures;
      double best = std::numeric_limits<double>::infinity();
      d_star = static_cast<double>(s.losses.front().first);
      for (const auto& [d, risk] : s.losses) {
        if (risk < best) {
          best = risk;
          d_star = static_cast<double>(d);
        }
      }
    }
    pts.emplace_back(s.flops, d_star);
  }
  out.fit = fit_power_law(pts);
  out.rejected = 2 * out.convex_failures > static_cast<int>(slices.size());
  return out;
}

std::vector<LossCurve> average_curves_by_d(const std::vector<LossCurve>& curves) {
  std::map<int64_t, std::vector<const LossCurve*>> groups;
  for (const LossCurve& c : curves) groups[c.d].push_back(&c);
  std::vector<LossCurve> out;
  for (const auto& [d, group] : groups) {
    if (group.size() == 1) {
      out.push_back(*group.front());
      continue;
    }
    LossCurve mean = *group.front();
    mean.seed = 0;
    for (size_t g = 1; g < group.size(); ++g) {
      const LossCurve& c = *group[g];
      if (c.points.size() != mean.points.size()) {
        throw config_error("cannot average curves with different checkpoint grids (d " +
                           std::to_string(d) + ")");
      }
      for (size_t i = 0; i < mean.points.size(); ++i) {
        if (c.points[i].iter != mean.points[i].iter) {
          throw config_error("cannot average curves with different checkpoint grids (d " +
                             std::to_string(d) + ")");
        }
        mean.points[i].risk += c.points[i].risk;
      }
      mean.diverged = mean.diverged || c.diverged;
    }
    const double inv = 1.0 / static_cast<double>(group.size());
    for (CurvePoint& p : mean.points) p.risk *= inv;
    out.push_back(std::move(mean));
  }
  return out;
}

namespace {

// Inner solve: log-flops on `hi` where its slope equals `target`; the slopes
// of loss curves rise toward zero, so bisection on a bracketing scan works.
bool match_slope(const LogLogInterp& curve, double target, double& lf_out) {
  const int scan_n = 400;
  double prev_lf = curve.log_min();
  double prev_val = curve.slope(prev_lf) - target;
  for (int i = 1; i <= scan_n; ++i) {
    const double lf = curve.log_min() +
                      (curve.log_max() - curve.log_min()) * static_cast<double>(i) / scan_n;
    const double val = curve.slope(lf) - target;
    if (prev_val == 0.0 || prev_val * val < 0.0) {
      double lo = prev_lf, hi = lf;
      double flo = prev_val;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = curve.slope(mid) - target;
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      lf_out = 0.5 * (lo + hi);
      return true;
    }
    prev_lf = lf;
    prev_val = val;
  }
  return false;
}

}  // namespace

std::vector<TangentPoint> approach0(const std::vector<LossCurve>& curves, double max_d_ratio) {
  std::map<int64_t, const LossCurve*> by_d;
  for (const LossCurve& c : curves) by_d[c.d] = &c;
  if (by_d.size() < 2) throw config_error("approach0 needs at least 2 distinct d");
  std::vector<TangentPoint> out;
  auto it = by_d.begin();
  auto next = std::next(it);
  for (; next != by_d.end(); ++it, ++next) {
    const double ratio = static_cast<double>(next->first) / static_cast<double>(it->first);
    if (ratio > max_d_ratio + 1e-12) continue;
    const LogLogInterp lo(*it->second), hi(*next->second);
    // Tangency: slope1(f1) = slope2(f2) = secant slope between the contact
    // points. Outer bisection on f1, inner slope matching on f2.
    auto residual = [&](double lf1, bool& ok) {
      const double s = lo.slope(lf1);
      double lf2;
      ok = match_slope(hi, s, lf2);
      if (!ok) return 0.0;
      const double secant = (hi.log_risk(lf2) - lo.log_risk(lf1)) / (lf2 - lf1);
      return secant - s;
    };
    const int scan_n = 300;
    bool found = false;
    double prev_lf1 = 0, prev_res = 0;
    bool prev_ok = false;
    for (int i = 0; i <= scan_n && !found; ++i) {
      const double lf1 = lo.log_min() +
                         (lo.log_max() - lo.log_min()) * static_cast<double>(i) / scan_n;
      bool ok;
      const double res = residual(lf1, ok);
      if (ok && prev_ok && (prev_res == 0.0 || prev_res * res < 0.0)) {
        double a = prev_lf1, b = lf1, fa = prev_res;
        for (int itb = 0; itb < 80; ++itb) {
          const double mid = 0.5 * (a + b);
          bool okm;
          const double fm = residual(mid, okm);
          if (!okm) break;
          if (fa * fm <= 0.0) {
            b = mid;
          } else {
            a = mid;
            fa = fm;
          }
        }
        const double lf1_star = 0.5 * (a + b);
        const double s = lo.slope(lf1_star);
        double lf2_star;
        // contact points must be genuinely separated; coincident curves
        // solve the system degenerately everywhere
        if (match_slope(hi, s, lf2_star) && lf2_star > lf1_star + 1e-3) {
          const double xi = (std::log(static_cast<double>(next->first)) -
                             std::log(static_cast<double>(it->first))) /
                            (lf2_star - lf1_star);
          out.push_back({std::exp(lf1_star), std::exp(lf2_star), xi});
          found = true;
        }
      }
      prev_lf1 = lf1;
      prev_res = res;
      prev_ok = ok;
    }
  }
  return out;
}

}  // namespace plrf
