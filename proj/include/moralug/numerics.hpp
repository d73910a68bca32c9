#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace moralug {

/// Raised when a bracketing, root or convergence step cannot complete.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

namespace numerics {

struct Maximum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of a unimodal function on [lo, hi].
Maximum golden_max(const std::function<double(double)>& f, double lo, double hi,
                   double x_tol = 1e-10);

/// Coarse scan with `scan_points` evenly spaced samples, then golden-section
/// refinement inside the two cells adjacent to the best sample. Endpoints are
/// always candidates, so boundary maxima are returned exactly.
Maximum scan_golden_max(const std::function<double(double)>& f, double lo, double hi,
                        int scan_points = 200, double x_tol = 1e-10);

/// Bisection for a sign change of f on [lo, hi]. Stops once |f(mid)| < f_tol
/// or the bracket is narrower than x_tol. Throws NumericError if f(lo) and
/// f(hi) share a strict sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double f_tol = 1e-10, double x_tol = 1e-14);

/// Adaptive Gauss-Kronrod (7/15) integration. `abs_tol` bounds the reported
/// error estimate; intervals of zero or negative width integrate to 0.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 1e-10);

}  // namespace numerics
}  // namespace moralug
