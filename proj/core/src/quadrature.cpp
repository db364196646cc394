#include "plrf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "plrf/errors.hpp"

namespace plrf {
namespace {

// Kronrod-15 nodes on [-1, 1] and weights; Gauss-7 uses the odd-indexed nodes.
constexpr double kXgk[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double kWgk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr double kWg[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

template <class T>
struct PanelResult {
  T value;
  double error;
};

template <class T, class F>
PanelResult<T> gauss_kronrod(const F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  T gk = T{};
  T g = T{};
  for (int i = 0; i < 15; ++i) {
    const T fx = f(c + h * kXgk[i]);
    gk += kWgk[i] * fx;
    if (i % 2 == 1) g += kWg[i / 2] * fx;
  }
  gk *= h;
  g *= h;
  return {gk, std::abs(gk - g)};
}

template <class T, class F>
T adaptive(const F& f, double a, double b, const QuadratureOptions& opt) {
  struct Segment {
    double a, b;
    T value;
    double error;
    int depth;
  };
  auto first = gauss_kronrod<T>(f, a, b);
  std::vector<Segment> segs{{a, b, first.value, first.error, 0}};
  T total = first.value;
  double total_err = first.error;
  auto tol = [&]() { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (total_err > tol()) {
    // split the worst segment
    size_t worst = 0;
    for (size_t i = 1; i < segs.size(); ++i) {
      if (segs[i].error > segs[worst].error) worst = i;
    }
    Segment s = segs[worst];
    if (s.depth >= opt.max_depth) throw numeric_error("quadrature failed to converge");
    const double mid = 0.5 * (s.a + s.b);
    auto left = gauss_kronrod<T>(f, s.a, mid);
    auto right = gauss_kronrod<T>(f, mid, s.b);
    total += left.value + right.value - s.value;
    total_err += left.error + right.error - s.error;
    segs[worst] = {s.a, mid, left.value, left.error, s.depth + 1};
    segs.push_back({mid, s.b, right.value, right.error, s.depth + 1});
    if (segs.size() > 100000) throw numeric_error("quadrature subdivision blow-up");
  }
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt) {
  if (a == b) return 0.0;
  return adaptive<double>(f, a, b, opt);
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, const QuadratureOptions& opt) {
  if (a == b) return {0.0, 0.0};
  return adaptive<std::complex<double>>(f, a, b, opt);
}

double integrate_power_singular(const std::function<double(double)>& g, double p, double a,
                                double b, const QuadratureOptions& opt) {
  if (!(p > -1.0)) throw numeric_error("integrate_power_singular: divergent exponent");
  if (p >= 0.0) {
    return integrate([&](double u) { return std::pow(u, p) * g(u); }, a, b, opt);
  }
  // u = s^{1/(1+p)}: u^p du = ds / (1+p)
  const double q = 1.0 + p;
  const double sa = std::pow(a, q);
  const double sb = std::pow(b, q);
  return integrate(
             [&](double s) { return g(std::pow(s, 1.0 / q)); }, sa, sb, opt) /
         q;
}

}  // namespace plrf
