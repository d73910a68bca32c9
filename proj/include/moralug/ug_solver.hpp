#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moralug/beliefs.hpp"
#include "moralug/preference.hpp"

namespace moralug {

/// Everything the optimal-strategy problem depends on besides (alpha, kappa).
struct UgSetting {
  PayoffCurve curve;
  BeliefDistribution thresholds;  // beliefs over others' rejection thresholds
  BeliefDistribution offers;      // beliefs over others' offers
  Endowment w;

  /// w = 10, CRRA rho = 0.05, Beta(2, 4) rescaled to [0, 5] for both beliefs.
  static UgSetting baseline();
};

enum class Region { R1, R2, R3 };

std::string to_string(Region r);

/// kappa = 1 leaves the rejection threshold undetermined.
class IndeterminateThreshold : public std::domain_error {
 public:
  IndeterminateThreshold() : std::domain_error("threshold indeterminate at kappa = 1") {}
};

/// symmetric_optimum was asked for an empty bracket.
class NotSymmetricRegime : public std::domain_error {
 public:
  NotSymmetricRegime() : std::domain_error("not in symmetric regime: x_tilde1 > x_lower2") {}
};

struct SymmetricOptimum {
  double x = 0.0;
  double utility = 0.0;
};

struct KappaTilde {
  double value = 0.0;
  /// no sign change of u(x_hat, x_hat) - u(x_s, x_lower2) on the kappa grid
  bool indifference_never_reached = false;
};

struct OptimalStrategy {
  Strategy strategy;
  Region region = Region::R1;
  double utility = 0.0;
  bool threshold_indeterminate = false;
  bool degenerate_belief = false;
};

struct SolverOutputs {
  double x_s = 0.0;
  double x_tilde1 = 0.0;
  std::optional<double> x_lower2;       // empty at kappa = 1
  std::optional<double> x_hat;          // only when x_tilde1 < x_lower2
  double alpha_bar = 0.0;               // +inf when x_s = w/2
  double alpha_tilde_of_kappa = 0.0;    // +inf when x_tilde1 = w/2
  std::optional<double> kappa_tilde_of_alpha;  // only for alpha > alpha_bar
  bool kappa_tilde_never_reached = false;
  OptimalStrategy optimal;
};

/// argmax of v(w - x) F(x).
double selfish_offer(const UgSetting& s);

/// argmax of (1-k) v(w-x) F(x) + k [v(w-x) + v(x)].
double constrained_offer(double kappa, const UgSetting& s);

/// Root of (1 + a - k) v(x) = a v(w - x) on (0, w/2); 0 when alpha <= 0.
/// Independent of beliefs. Throws IndeterminateThreshold at kappa = 1.
double constrained_threshold(double kappa, double alpha, const PayoffCurve& curve,
                             const Endowment& w);

/// argmax of u(y, y) over [x_tilde1, x_lower2].
SymmetricOptimum symmetric_optimum(double kappa, double alpha, const UgSetting& s);
/// Same over an explicit bracket; lo > hi throws NotSymmetricRegime.
SymmetricOptimum symmetric_optimum(double kappa, double alpha, const UgSetting& s, double lo,
                                   double hi);

/// v(x_s) / (v(w - x_s) - v(x_s)); +inf if x_s = w/2.
double alpha_bar(const UgSetting& s);

/// (1-k) v(x~1) / (v(w - x~1) - v(x~1)); the alpha at which x~1 = x_lower2.
double alpha_tilde(double kappa, const UgSetting& s);

/// Indifference value u(x_hat, x_hat) - u(x_s, x_lower2), the function whose
/// root is kappa_tilde. Positive when the symmetric strategy is preferred.
double symmetric_advantage(double kappa, double alpha, const UgSetting& s);

/// Root in [0, 1) of symmetric_advantage. Empty for alpha <= alpha_bar.
std::optional<KappaTilde> kappa_tilde(double alpha, const UgSetting& s);

/// Utility-maximizing strategy with its region label.
OptimalStrategy optimal_strategy(const PreferenceParams& p, const UgSetting& s);

/// All solver objects for one parameter point.
SolverOutputs solve(const PreferenceParams& p, const UgSetting& s);

struct RegionCell {
  double alpha = 0.0;
  double kappa = 0.0;
  Region region = Region::R1;
  Strategy strategy;
};

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct RegionMap {
  std::vector<RegionCell> cells;          // kappa-major, alpha-minor
  double alpha_bar = 0.0;
  std::vector<CurvePoint> alpha_tilde;    // (kappa, alpha_tilde(kappa))
  std::vector<CurvePoint> kappa_tilde;    // (alpha, kappa_tilde(alpha)), alpha > alpha_bar
  int count(Region r) const;
};

/// Evenly spaced grid, inclusive of both ends.
std::vector<double> linspace(double lo, double hi, int n);

RegionMap region_map(const std::vector<double>& alphas, const std::vector<double>& kappas,
                     const UgSetting& s);

struct StaticsRow {
  double kappa = 0.0;
  Strategy strategy;
  Region region = Region::R1;
};

struct RegionSwitch {
  double kappa = 0.0;  // refined by bisection between the grid points
  Region from = Region::R1;
  Region to = Region::R1;
  Strategy before;
  Strategy after;
};

struct Statics {
  double alpha = 0.0;
  std::vector<StaticsRow> rows;
  std::vector<RegionSwitch> switches;
};

Statics comparative_statics(double alpha, const std::vector<double>& kappas, const UgSetting& s);

}  // namespace moralug
