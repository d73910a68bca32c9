#pragma once

#include <string>

#include "moralug/beliefs.hpp"

namespace moralug {

/// Behavioral parameters: spite when behind (alpha), guilt/altruism when ahead
/// (beta), weight on the universalized payoff (kappa) and choice noise (lambda,
/// used only in estimation).
struct PreferenceParams {
  double alpha = 0.0;
  double beta = 0.0;
  double kappa = 0.0;
  double lambda = 0.0;

  /// Throws std::invalid_argument unless kappa and lambda lie in [0, 1].
  void validate() const;
  /// alpha, beta in [-2, 2] and kappa in [0, 1].
  bool in_test_box() const;
};

/// Monetary evaluation v with v(0) = 0.
class PayoffCurve {
 public:
  enum class Kind { Linear, CRRA, ShiftedLog };

  static PayoffCurve linear() { return PayoffCurve(Kind::Linear, 0.0); }
  /// x^(1-rho)/(1-rho), rho in (0, 1).
  static PayoffCurve crra(double crra_rho);
  static PayoffCurve shifted_log() { return PayoffCurve(Kind::ShiftedLog, 0.0); }

  Kind kind() const { return kind_; }
  double crra_rho() const { return rho_; }

  /// v(x); throws std::domain_error for x < 0.
  double value(double x) const;
  /// v'(x); +inf at 0 for CRRA.
  double derivative(double x) const;

  std::string describe() const;

 private:
  PayoffCurve(Kind kind, double rho) : kind_(kind), rho_(rho) {}
  Kind kind_;
  double rho_;
};

/// Offer as proposer (x1) and rejection threshold as responder (x2).
struct Strategy {
  double x1 = 0.0;
  double x2 = 0.0;

  void validate(double w) const;
};

/// Pie size in money units. Estimation contexts use 58.8 points (10 EUR).
struct Endowment {
  static constexpr double kEstimationPoints = 58.8;

  double w = kEstimationPoints;

  explicit Endowment(double pie = kEstimationPoints);
  double half() const { return 0.5 * w; }
};

double eval_curve(const PayoffCurve& curve, double x);

/// Ultimatum-game utility behind the veil of ignorance given beliefs over
/// others' thresholds (proposer side) and offers (responder side):
///
///   (1-k) v(w-x1) F(x1)
///   + int_{x2}^{w/2} [(1-k+a) v(y) - a v(w-y)] dF(y)
///   + k 1{x1 >= x2} [v(w-x1) + v(x1)]
///
/// The responder integral uses adaptive Gauss-Kronrod at abs tol 1e-10.
double eval_expected_utility(const PreferenceParams& p, const PayoffCurve& curve,
                             const BeliefDistribution& thresholds,
                             const BeliefDistribution& offers, const Strategy& s,
                             const Endowment& w);

/// The responder integral on its own; exposed for the solver and FOC checks.
double responder_value(double alpha, double kappa, const PayoffCurve& curve,
                       const BeliefDistribution& offers, double x2, const Endowment& w);

/// Ex-post utility of `own` against a single opponent strategy `other` with the
/// same preferences. Inequality terms are evaluated on the realized split, so
/// the proposer bears behindness aversion when its offer exceeds w/2 and the
/// responder bears it otherwise.
double eval_expost_symmetric(const PreferenceParams& p, const PayoffCurve& curve,
                             const Strategy& own, const Strategy& other, const Endowment& w);

/// Dictator-game objective (role weights 1/2 retained).
double dg_objective(const PreferenceParams& p, const PayoffCurve& curve, double transfer,
                    const Endowment& w);

/// Optimal dictator transfer on [0, w]. Uses the closed form for ShiftedLog when
/// it lands on the advantageous side, otherwise a scan plus golden search.
double dg_transfer(const PreferenceParams& p, const PayoffCurve& curve, const Endowment& w);

}  // namespace moralug
