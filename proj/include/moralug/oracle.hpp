#pragma once

#include <vector>

#include "moralug/beliefs.hpp"
#include "moralug/preference.hpp"

namespace moralug {

/// Regular grid {0, step, 2 step, ...} over [0, w], either the full square
/// of (x1, x2) pairs or only its diagonal.
struct GridSpec {
  enum class Domain { Square, Diagonal };
  double step = 0.0;
  Domain domain = Domain::Square;

  static GridSpec square(double step) { return GridSpec{step, Domain::Square}; }
  static GridSpec diagonal(double step) { return GridSpec{step, Domain::Diagonal}; }
  std::vector<double> points(const Endowment& w) const;
};

struct GridOptimum {
  Strategy strategy;
  double utility = 0.0;
  bool unique = true;  // no other cell within 1e-12 of the maximum
};

/// Brute-force evaluator for the ultimatum utility. Responder integrals are
/// tabulated once per grid with a composite Simpson rule on a fine mesh, so
/// nothing here shares numerics with the analytic solver.
class UgOracle {
 public:
  UgOracle(PayoffCurve curve, BeliefDistribution thresholds, BeliefDistribution offers,
           Endowment w, GridSpec grid);

  /// Exhaustive argmax; ties go to the lowest x1, then the lowest x2.
  GridOptimum maximize(double alpha, double kappa) const;
  /// Utility on grid cell (i, j), i.e. x1 = points[i], x2 = points[j].
  double utility(double alpha, double kappa, size_t i, size_t j) const;
  const std::vector<double>& points() const { return points_; }

 private:
  PayoffCurve curve_;
  Endowment w_;
  GridSpec grid_;
  std::vector<double> points_;
  std::vector<double> proposer_;  // v(w - x1) F(x1)
  std::vector<double> moral_;     // v(w - x1) + v(x1)
  std::vector<double> tail_own_;  // int_{x2}^{w/2} v(y) dF
  std::vector<double> tail_oth_;  // int_{x2}^{w/2} v(w - y) dF
};

GridOptimum brute_force_ug(const PreferenceParams& p, const PayoffCurve& curve,
                           const BeliefDistribution& thresholds, const BeliefDistribution& offers,
                           const Endowment& w, const GridSpec& grid);

/// Ultimatum utility at an arbitrary point via the oracle's own quadrature
/// (Simpson on `panels` cells) instead of adaptive Gauss-Kronrod.
double oracle_utility(const PreferenceParams& p, const PayoffCurve& curve,
                      const BeliefDistribution& thresholds, const BeliefDistribution& offers,
                      const Strategy& s, const Endowment& w, int panels = 50000);

struct DgOptimum {
  double transfer = 0.0;
  double utility = 0.0;
};

/// 1-D scan of the dictator objective over {0, step, ..., w}.
DgOptimum brute_force_dg(const PreferenceParams& p, const PayoffCurve& curve, const Endowment& w,
                         double step);

/// Central-difference gradient (step 1e-5 w) of the expected utility minus the
/// analytic first-order expressions.
struct FocResidual {
  double offer = 0.0;          // finite difference minus analytic, x1 component
  double threshold = 0.0;      // same for x2
  double grad_offer = 0.0;     // the finite-difference gradient itself
  double grad_threshold = 0.0;
};

/// Throws std::domain_error at (or within one difference step of) the
/// diagonal, where the utility jumps, and std::invalid_argument for beliefs
/// without a density.
FocResidual foc_residual(const PreferenceParams& p, const PayoffCurve& curve,
                         const BeliefDistribution& thresholds, const BeliefDistribution& offers,
                         const Endowment& w, const Strategy& x);

/// Analytic partial derivatives used by foc_residual.
double analytic_offer_derivative(const PreferenceParams& p, const PayoffCurve& curve,
                                 const BeliefDistribution& thresholds, const Endowment& w,
                                 const Strategy& x);
double analytic_threshold_derivative(const PreferenceParams& p, const PayoffCurve& curve,
                                     const BeliefDistribution& offers, const Endowment& w,
                                     const Strategy& x);

}  // namespace moralug
