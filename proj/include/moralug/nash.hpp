#pragma once

#include <string>
#include <utility>
#include <vector>

#include "moralug/preference.hpp"

namespace moralug {

enum class NashSetKind { SymmetricSegment, SegmentPlusAsymmetricStub };

struct NashCheck {
  bool is_nash = false;
  Strategy best_deviation;
  double gain = 0.0;  // utility gain of best_deviation over the profile
};

/// Profiles (tau, x2) for x2 on the deviation grid that survive the verifier.
struct StubReport {
  double x1 = 0.0;
  std::vector<std::pair<double, double>> passing_x2;  // contiguous runs
  std::string direction;  // "below", "above", "both" or "none" relative to x2 = x1
};

struct NashBounds {
  double tau = 0.0;
  double x2_lower = 0.0;
  double x1_upper = 0.0;  // literal bound, reported only
  double x1_cap = 0.0;    // bound that clips the segment
  double rho = 0.0;
  bool rho_found = true;
  double segment_lo = 0.0;
  double segment_hi = 0.0;
  bool empty = false;  // no symmetric equilibrium on the grid
  NashSetKind kind = NashSetKind::SymmetricSegment;
  StubReport stub;     // filled when tau > x2_lower
};

/// min{x in [0, w]: v'(w - x) >= k v'(x)}.
double tau_of_kappa(double kappa, const PayoffCurve& curve, const Endowment& w);

/// max{x in [0, w]: (1 - k + a) v(w - x) >= v(x)}.
double x1_upper_of(double kappa, double alpha, const PayoffCurve& curve, const Endowment& w);

/// max{x in [0, w]: (1 - k + a) v(w - x) >= a v(x)}: the offer above which a
/// symmetric profile's proposer gains by cutting the offer. Never below w/2
/// and equal to w when a = 0.
double x1_cap_of(double kappa, double alpha, const PayoffCurve& curve, const Endowment& w);

/// Symmetric-profile acceptance bound; equals the UG threshold for kappa < 1,
/// and w/2 (alpha > 0) or 0 (alpha <= 0) at kappa = 1.
double nash_x2_lower(double kappa, double alpha, const PayoffCurve& curve, const Endowment& w);

/// Grid best-response check of the symmetric profile where both players use
/// `profile`. Deviations range over {0, step, ..., w} plus the profile's own
/// coordinates; a gain above `tol` breaks the equilibrium.
NashCheck verify_nash(const Strategy& profile, double kappa, double alpha, const PayoffCurve& curve,
                      const Endowment& w, double grid_step, double tol = 1e-9);

struct RhoResult {
  double rho = 0.0;
  bool found = false;
};

/// Largest x on {w/2, w/2 + step, ...} <= w whose profile (x, x) passes
/// verify_nash. Numeric surrogate; no closed form is used.
RhoResult rho_of_kappa(double kappa, const PayoffCurve& curve, const Endowment& w, double grid_step,
                       double alpha = 0.0);

/// Segment [max(x2_lower, tau), min(x1_upper, rho)] from given bounds.
NashBounds assemble_nash_set(double tau, double x2_lower, double x1_upper, double rho);

/// Full set with the numeric rho evaluated at the same alpha. The segment is
/// clipped by x1_cap_of; x1_upper_of is reported alongside.
NashBounds nash_set(double kappa, double alpha, const PayoffCurve& curve, const Endowment& w,
                    double grid_step = 0.0);

std::string to_string(NashSetKind k);

}  // namespace moralug
