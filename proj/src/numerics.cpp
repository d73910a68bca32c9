#include "moralug/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace moralug::numerics {

Maximum golden_max(const std::function<double(double)>& f, double lo, double hi, double x_tol) {
  if (hi < lo) std::swap(lo, hi);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Maximum best{0.5 * (a + b), f(0.5 * (a + b))};
  // the bracket may have converged onto an endpoint of [lo, hi]
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > best.value) best = {x, fx};
  }
  return best;
}

Maximum scan_golden_max(const std::function<double(double)>& f, double lo, double hi,
                        int scan_points, double x_tol) {
  if (hi < lo) std::swap(lo, hi);
  if (hi - lo <= 0.0) return {lo, f(lo)};
  scan_points = std::max(scan_points, 3);
  const double step = (hi - lo) / (scan_points - 1);
  int best_i = 0;
  double best_v = -INFINITY;
  for (int i = 0; i < scan_points; ++i) {
    const double x = (i == scan_points - 1) ? hi : lo + step * i;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double a = std::max(lo, lo + step * (best_i - 1));
  const double b = std::min(hi, lo + step * (best_i + 1));
  Maximum refined = golden_max(f, a, b, x_tol);
  const double x_best = (best_i == scan_points - 1) ? hi : lo + step * best_i;
  if (best_v > refined.value) return {x_best, best_v};
  return refined;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double f_tol,
              double x_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (std::abs(flo) < f_tol) return lo;
  if (std::abs(fhi) < f_tol) return hi;
  if ((flo > 0) == (fhi > 0)) {
    throw NumericError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) < f_tol || (hi - lo) < x_tol) break;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return mid;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double abs_tol) {
  if (!(hi > lo)) return 0.0;
  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  // boost's tolerance is relative to the L1 norm, so convert abs_tol using a
  // single-panel L1 estimate; a floor near machine precision keeps tiny
  // integrals from recursing to full depth
  double l1 = 0.0;
  gk::integrate(f, lo, hi, 0, 0.0, nullptr, &l1);
  const double rel = std::clamp(abs_tol / std::max(l1, 1e-300), 1e-13, 1e-3);
  return gk::integrate(f, lo, hi, 15, rel);
}

}  // namespace moralug::numerics
