#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "plrf/problem.hpp"

namespace plrf {

// Least-squares power law y = a x^b fitted in log-log space.
struct FrontierFit {
  double a = 0.0;
  double b = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  int n_slices = 0;
  double residual = 0.0;        // RMS residual in log-log
  bool low_information = false;  // e.g. all slices share the same min_d
};

FrontierFit fit_power_law(const std::vector<std::pair<double, double>>& points);

// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of a curve in
// log-log coordinates. Extrapolation is forbidden.
class LogLogInterp {
 public:
  explicit LogLogInterp(const LossCurve& curve);
  double log_risk(double log_flops) const;
  double slope(double log_flops) const;  // d log risk / d log flops
  double log_min() const { return lx_.front(); }
  double log_max() const { return lx_.back(); }
  bool covers(double log_flops) const {
    return log_flops >= lx_.front() && log_flops <= lx_.back();
  }

 private:
  std::vector<double> lx_, ly_, slope_;
};

struct IsoFlopSlice {
  double flops;
  std::vector<std::pair<int64_t, double>> losses;  // (d, interpolated risk)
  int64_t min_d;
  double min_risk;
};

// n geometrically spaced flops values spanning `window`; curves are
// interpolated in log-log and the per-slice minimum over d is recorded.
std::vector<IsoFlopSlice> isoflop_slices(const std::vector<LossCurve>& curves,
                                         std::pair<double, double> window, int n);

// Approach 1: d* = a f^b from the slice minima. The companion eta fit uses
// P* = a f^{-eta} (so fit.b = -eta).
FrontierFit approach1_xi(const std::vector<IsoFlopSlice>& slices);
FrontierFit frontier_eta(const std::vector<IsoFlopSlice>& slices);

// Approach 2: per-slice parabola in (log d, log P); vertex when convex, else
// the discrete minimizer (counted); rejected when more than half the slices
// fail convexity.
struct Approach2Result {
  FrontierFit fit;
  int convex_failures = 0;
  bool rejected = false;
};

Approach2Result approach2(const std::vector<LossCurve>& curves,
                          const std::vector<IsoFlopSlice>& slices);

// Approach 0: common tangent between two adjacent-d curves; instantaneous
// xi = (log d2 - log d1) / (log f2* - log f1*).
struct TangentPoint {
  double flops1;
  double flops2;
  double xi;
};

std::vector<TangentPoint> approach0(const std::vector<LossCurve>& curves,
                                    double max_d_ratio = 1.2);

// One curve per d: replicates are averaged pointwise (they must share the
// checkpoint grid). Curves already unique per d pass through unchanged.
std::vector<LossCurve> average_curves_by_d(const std::vector<LossCurve>& curves);

}  // namespace plrf
