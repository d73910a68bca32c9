#include "moralug/preference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "moralug/numerics.hpp"

namespace moralug {

void PreferenceParams::validate() const {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("alpha and beta must be finite");
  }
}

bool PreferenceParams::in_test_box() const {
  return alpha >= -2.0 && alpha <= 2.0 && beta >= -2.0 && beta <= 2.0 && kappa >= 0.0 &&
         kappa <= 1.0;
}

PayoffCurve PayoffCurve::crra(double crra_rho) {
  if (!(crra_rho > 0.0 && crra_rho < 1.0)) throw std::invalid_argument("CRRA rho must lie in (0, 1)");
  return PayoffCurve(Kind::CRRA, crra_rho);
}

double PayoffCurve::value(double x) const {
  if (x < 0.0) {
    // w - x1 can round to a hair below zero at x1 = w
    if (x > -1e-12) x = 0.0;
    else throw std::domain_error("payoff curve evaluated at negative money");
  }
  switch (kind_) {
    case Kind::Linear:
      return x;
    case Kind::CRRA:
      return std::pow(x, 1.0 - rho_) / (1.0 - rho_);
    case Kind::ShiftedLog:
      return std::log1p(x);
  }
  return x;
}

double PayoffCurve::derivative(double x) const {
  if (x < 0.0) throw std::domain_error("payoff curve derivative at negative money");
  switch (kind_) {
    case Kind::Linear:
      return 1.0;
    case Kind::CRRA:
      return x == 0.0 ? INFINITY : std::pow(x, -rho_);
    case Kind::ShiftedLog:
      return 1.0 / (1.0 + x);
  }
  return 1.0;
}

std::string PayoffCurve::describe() const {
  switch (kind_) {
    case Kind::Linear:
      return "linear";
    case Kind::CRRA: {
      std::ostringstream os;
      os << "crra(" << rho_ << ")";
      return os.str();
    }
    case Kind::ShiftedLog:
      return "shifted_log";
  }
  return "?";
}

void Strategy::validate(double w) const {
  if (!(x1 >= 0.0 && x1 <= w) || !(x2 >= 0.0 && x2 <= w)) {
    throw std::domain_error("strategy components must lie in [0, w]");
  }
}

Endowment::Endowment(double pie) : w(pie) {
  if (!(pie > 0.0) || !std::isfinite(pie)) throw std::invalid_argument("endowment must be positive");
}

double eval_curve(const PayoffCurve& curve, double x) { return curve.value(x); }

double responder_value(double alpha, double kappa, const PayoffCurve& curve,
                       const BeliefDistribution& offers, double x2, const Endowment& w) {
  const double wv = w.w;
  return offers.integrate_from(
      [&](double y) {
        return (1.0 - kappa + alpha) * curve.value(y) - alpha * curve.value(wv - y);
      },
      x2);
}

double eval_expected_utility(const PreferenceParams& p, const PayoffCurve& curve,
                             const BeliefDistribution& thresholds,
                             const BeliefDistribution& offers, const Strategy& s,
                             const Endowment& w) {
  s.validate(w.w);
  const double k = p.kappa;
  double u = (1.0 - k) * curve.value(w.w - s.x1) * thresholds.cdf(s.x1);
  if (s.x2 < w.half()) u += responder_value(p.alpha, k, curve, offers, s.x2, w);
  if (s.x1 >= s.x2) u += k * (curve.value(w.w - s.x1) + curve.value(s.x1));
  return u;
}

namespace {
// own material evaluation with inequality terms on a realized split
double realized(const PreferenceParams& p, double v_own, double v_other) {
  return (1.0 - p.kappa) * v_own - p.alpha * std::max(v_other - v_own, 0.0) -
         p.beta * std::max(v_own - v_other, 0.0);
}
}  // namespace

double eval_expost_symmetric(const PreferenceParams& p, const PayoffCurve& curve,
                             const Strategy& own, const Strategy& other, const Endowment& w) {
  own.validate(w.w);
  other.validate(w.w);
  double u = 0.0;
  if (own.x1 >= other.x2) {
    u += realized(p, curve.value(w.w - own.x1), curve.value(own.x1));
  }
  if (other.x1 >= own.x2) {
    u += realized(p, curve.value(other.x1), curve.value(w.w - other.x1));
  }
  if (own.x1 >= own.x2) {
    u += p.kappa * (curve.value(w.w - own.x1) + curve.value(own.x1));
  }
  return u;
}

double dg_objective(const PreferenceParams& p, const PayoffCurve& curve, double transfer,
                    const Endowment& w) {
  if (transfer < 0.0 || transfer > w.w) throw std::domain_error("transfer outside [0, w]");
  const double keep = curve.value(w.w - transfer);
  const double give = curve.value(transfer);
  return 0.5 * (1.0 - p.kappa) * keep - 0.5 * p.alpha * std::max(give - keep, 0.0) -
         0.5 * p.beta * std::max(keep - give, 0.0) + 0.5 * p.kappa * (keep + give);
}

double dg_transfer(const PreferenceParams& p, const PayoffCurve& curve, const Endowment& w) {
  const double half = w.half();
  const auto obj = [&](double x) { return dg_objective(p, curve, x, w); };

  std::vector<double> candidates{0.0, half, w.w};
  if (curve.kind() == PayoffCurve::Kind::ShiftedLog) {
    // stationary points of (1-b) v(w-x) + (b+k) v(x) below w/2 and of
    // (1+a) v(w-x) + (k-a) v(x) above it
    const double ahead = ((p.beta + p.kappa) * (w.w + 1.0) - (1.0 - p.beta)) / (1.0 + p.kappa);
    const double behind = ((p.kappa - p.alpha) * (w.w + 1.0) - (1.0 + p.alpha)) / (1.0 + p.kappa);
    candidates.push_back(std::clamp(ahead, 0.0, half));
    candidates.push_back(std::clamp(behind, half, w.w));
  } else {
    candidates.push_back(numerics::scan_golden_max(obj, 0.0, half, 200, 1e-12).x);
    candidates.push_back(numerics::scan_golden_max(obj, half, w.w, 200, 1e-12).x);
  }
  std::sort(candidates.begin(), candidates.end());
  double best_x = candidates.front();
  double best_v = obj(best_x);
  for (double x : candidates) {
    const double v = obj(x);
    if (v > best_v + 1e-15) {
      best_v = v;
      best_x = x;
    }
  }
  return std::clamp(best_x, 0.0, w.w);
}

}  // namespace moralug
