#include "moralug/nash.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "moralug/numerics.hpp"
#include "moralug/ug_solver.hpp"

namespace moralug {

namespace {

void require_kappa(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0, 1]");
}

std::vector<double> deviation_grid(const Endowment& w, double step, const Strategy& profile) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor(w.w / step + 1e-9));
  g.reserve(static_cast<size_t>(n) + 3);
  for (long i = 0; i <= n; ++i) g.push_back(std::min(static_cast<double>(i) * step, w.w));
  g.push_back(w.w);
  g.push_back(profile.x1);
  g.push_back(profile.x2);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

}  // namespace

std::string to_string(NashSetKind k) {
  return k == NashSetKind::SymmetricSegment ? "SymmetricSegment" : "SegmentPlusAsymmetricStub";
}

double tau_of_kappa(double kappa, const PayoffCurve& curve, const Endowment& w) {
  require_kappa(kappa);
  const double ww = w.w;
  const auto h = [&](double x) { return curve.derivative(ww - x) - kappa * curve.derivative(x); };
  if (h(0.0) >= 0.0) return 0.0;
  // h increases in x and h(w/2) = (1-k) v'(w/2) >= 0
  return numerics::bisect(h, 0.0, w.half(), 1e-10, 1e-15);
}

double x1_upper_of(double kappa, double alpha, const PayoffCurve& curve, const Endowment& w) {
  require_kappa(kappa);
  const double ww = w.w;
  const double c = 1.0 - kappa + alpha;
  const auto g = [&](double x) { return c * curve.value(ww - x) - curve.value(x); };
  if (g(0.0) < 0.0) return 0.0;
  return numerics::bisect(g, 0.0, ww, 1e-10, 1e-15);
}

double x1_cap_of(double kappa, double alpha, const PayoffCurve& curve, const Endowment& w) {
  require_kappa(kappa);
  const double ww = w.w;
  const auto g = [&](double x) { return (1.0 - kappa + alpha) * curve.value(ww - x) - alpha * curve.value(x); };
  if (g(ww) >= 0.0) return ww;
  return numerics::bisect(g, w.half(), ww, 1e-10, 1e-15);
}

double nash_x2_lower(double kappa, double alpha, const PayoffCurve& curve, const Endowment& w) {
  if (kappa < 1.0) return constrained_threshold(kappa, alpha, curve, w);
  return alpha > 0.0 ? w.half() : 0.0;
}

NashCheck verify_nash(const Strategy& profile, double kappa, double alpha, const PayoffCurve& curve,
                      const Endowment& w, double grid_step, double tol) {
  profile.validate(w.w);
  PreferenceParams p;
  p.alpha = alpha;
  p.kappa = kappa;
  const double base = eval_expost_symmetric(p, curve, profile, profile, w);
  const auto g = deviation_grid(w, grid_step, profile);
  const size_t n = g.size();

  // the ex-post utility splits into proposer(x1), responder(x2) and a
  // universalization term that needs x1 >= x2
  const double ww = w.w;
  std::vector<double> prop(n), resp(n), univ(n);
  const double other_x1 = profile.x1;
  const double resp_gain = (1.0 - kappa) * curve.value(other_x1) -
                           alpha * std::max(curve.value(ww - other_x1) - curve.value(other_x1), 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double keep = curve.value(ww - g[i]);
    const double give = curve.value(g[i]);
    prop[i] = g[i] >= profile.x2
                  ? (1.0 - kappa) * keep - alpha * std::max(give - keep, 0.0)
                  : 0.0;
    resp[i] = other_x1 >= g[i] ? resp_gain : 0.0;
    univ[i] = kappa * (keep + give);
  }

  NashCheck out;
  out.is_nash = true;
  out.best_deviation = profile;
  double best = base;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const double u = prop[i] + resp[j] + (g[i] >= g[j] ? univ[i] : 0.0);
      if (u > best + 1e-15) {
        best = u;
        out.best_deviation = Strategy{g[i], g[j]};
      }
    }
  }
  if (best - base > tol) {
    out.is_nash = false;
    out.gain = eval_expost_symmetric(p, curve, out.best_deviation, profile, w) - base;
  } else {
    out.best_deviation = profile;
  }
  return out;
}

RhoResult rho_of_kappa(double kappa, const PayoffCurve& curve, const Endowment& w, double grid_step,
                       double alpha) {
  require_kappa(kappa);
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const auto n = static_cast<long>(std::floor(w.half() / grid_step + 1e-9));
  for (long i = n; i >= 0; --i) {
    const double x = w.half() + static_cast<double>(i) * grid_step;
    if (verify_nash(Strategy{x, x}, kappa, alpha, curve, w, grid_step).is_nash) {
      return RhoResult{x, true};
    }
  }
  return RhoResult{w.half(), false};
}

NashBounds assemble_nash_set(double tau, double x2_lower, double x1_upper, double rho) {
  NashBounds b;
  b.tau = tau;
  b.x2_lower = x2_lower;
  b.x1_upper = x1_upper;
  b.x1_cap = x1_upper;
  b.rho = rho;
  b.segment_lo = std::max(x2_lower, tau);
  b.segment_hi = std::min(x1_upper, rho);
  b.empty = b.segment_lo > b.segment_hi;
  b.kind = tau > x2_lower ? NashSetKind::SegmentPlusAsymmetricStub : NashSetKind::SymmetricSegment;
  return b;
}

NashBounds nash_set(double kappa, double alpha, const PayoffCurve& curve, const Endowment& w,
                    double grid_step) {
  require_kappa(kappa);
  if (!(kappa > 0.0)) throw std::invalid_argument("nash set needs kappa in (0, 1]");
  if (alpha < 0.0) throw std::invalid_argument("nash set needs alpha >= 0");
  if (grid_step <= 0.0) grid_step = w.w / 400.0;
  const double tau = tau_of_kappa(kappa, curve, w);
  const double x2l = nash_x2_lower(kappa, alpha, curve, w);
  const double cap = x1_cap_of(kappa, alpha, curve, w);
  const auto rho = rho_of_kappa(kappa, curve, w, grid_step, alpha);
  NashBounds b = assemble_nash_set(tau, x2l, cap, rho.rho);
  b.x1_upper = x1_upper_of(kappa, alpha, curve, w);
  b.x1_cap = cap;
  b.rho_found = rho.found;
  if (!rho.found) b.empty = true;

  if (b.kind == NashSetKind::SegmentPlusAsymmetricStub) {
    b.stub.x1 = tau;
    const auto n = static_cast<long>(std::floor(w.w / grid_step + 1e-9));
    bool below = false, above = false;
    bool in_run = false;
    for (long i = 0; i <= n; ++i) {
      const double x2 = static_cast<double>(i) * grid_step;
      const bool ok = verify_nash(Strategy{tau, x2}, kappa, alpha, curve, w, grid_step).is_nash;
      if (ok) {
        if (!in_run) b.stub.passing_x2.emplace_back(x2, x2);
        b.stub.passing_x2.back().second = x2;
        if (x2 < tau) below = true;
        if (x2 > tau) above = true;
      }
      in_run = ok;
    }
    b.stub.direction = below && above ? "both" : below ? "below" : above ? "above" : "none";
  }
  return b;
}

}  // namespace moralug
