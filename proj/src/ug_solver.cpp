#include "moralug/ug_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moralug/numerics.hpp"

namespace moralug {

namespace {

constexpr int kScanPoints = 200;
constexpr int kSymmetricScan = 50;
constexpr int kKappaGrid = 100;
constexpr double kInf = std::numeric_limits<double>::infinity();

double utility(double alpha, double kappa, const UgSetting& s, double x1, double x2) {
  PreferenceParams p;
  p.alpha = alpha;
  p.kappa = kappa;
  return eval_expected_utility(p, s.curve, s.thresholds, s.offers, Strategy{x1, x2}, s.w);
}

bool at_half(double x, const Endowment& w) { return x >= w.half() - 1e-12 * w.w; }

}  // namespace

UgSetting UgSetting::baseline() {
  const Endowment w(10.0);
  const auto beliefs = BeliefDistribution::scaled_beta(2.0, 4.0, w.half());
  return UgSetting{PayoffCurve::crra(0.05), beliefs, beliefs, w};
}

std::string to_string(Region r) {
  switch (r) {
    case Region::R1:
      return "R1";
    case Region::R2:
      return "R2";
    case Region::R3:
      return "R3";
  }
  return "?";
}

double selfish_offer(const UgSetting& s) {
  const double w = s.w.w;
  const auto f = [&](double x) { return s.curve.value(w - x) * s.thresholds.cdf(x); };
  return numerics::scan_golden_max(f, 0.0, s.w.half(), kScanPoints).x;
}

double constrained_offer(double kappa, const UgSetting& s) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0, 1]");
  const double w = s.w.w;
  // beyond w/2 the objective is v(w-x) + k v(x), which is decreasing there
  const auto f = [&](double x) {
    const double keep = s.curve.value(w - x);
    return (1.0 - kappa) * keep * s.thresholds.cdf(x) + kappa * (keep + s.curve.value(x));
  };
  return numerics::scan_golden_max(f, 0.0, s.w.half(), kScanPoints).x;
}

double constrained_threshold(double kappa, double alpha, const PayoffCurve& curve,
                             const Endowment& w) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0, 1]");
  if (kappa == 1.0) throw IndeterminateThreshold();
  if (alpha <= 0.0) return 0.0;
  const double ww = w.w;
  const auto h = [&](double x) {
    return (1.0 + alpha - kappa) * curve.value(x) - alpha * curve.value(ww - x);
  };
  // h(0) = -a v(w) < 0 and h(w/2) = (1-k) v(w/2) > 0
  return numerics::bisect(h, 0.0, w.half(), 1e-13, 1e-15);
}

SymmetricOptimum symmetric_optimum(double kappa, double alpha, const UgSetting& s, double lo,
                                   double hi) {
  if (lo > hi + 1e-12) throw NotSymmetricRegime();
  const auto f = [&](double y) { return utility(alpha, kappa, s, y, y); };
  if (hi - lo <= 1e-12) return SymmetricOptimum{lo, f(lo)};
  const auto m = numerics::scan_golden_max(f, lo, hi, kSymmetricScan, 1e-9);
  return SymmetricOptimum{m.x, m.value};
}

SymmetricOptimum symmetric_optimum(double kappa, double alpha, const UgSetting& s) {
  const double lo = constrained_offer(kappa, s);
  const double hi = constrained_threshold(kappa, alpha, s.curve, s.w);
  return symmetric_optimum(kappa, alpha, s, lo, hi);
}

double alpha_bar(const UgSetting& s) {
  const double xs = selfish_offer(s);
  if (at_half(xs, s.w)) return kInf;
  const double v = s.curve.value(xs);
  return v / (s.curve.value(s.w.w - xs) - v);
}

double alpha_tilde(double kappa, const UgSetting& s) {
  const double x = constrained_offer(kappa, s);
  if (at_half(x, s.w)) return kInf;
  const double v = s.curve.value(x);
  return (1.0 - kappa) * v / (s.curve.value(s.w.w - x) - v);
}

double symmetric_advantage(double kappa, double alpha, const UgSetting& s) {
  const double xt1 = constrained_offer(kappa, s);
  const double xl2 = constrained_threshold(kappa, alpha, s.curve, s.w);
  const auto sym = symmetric_optimum(kappa, alpha, s, std::min(xt1, xl2), std::max(xt1, xl2));
  return sym.utility - utility(alpha, kappa, s, selfish_offer(s), xl2);
}

std::optional<KappaTilde> kappa_tilde(double alpha, const UgSetting& s) {
  if (!(alpha > alpha_bar(s))) return std::nullopt;
  const auto g = [&](double k) { return symmetric_advantage(k, alpha, s); };
  double prev_k = 0.0;
  double prev_g = g(prev_k);
  if (prev_g >= 0.0) return KappaTilde{0.0, false};
  for (int i = 1; i < kKappaGrid; ++i) {
    const double k = static_cast<double>(i) / kKappaGrid;
    const double gk = g(k);
    if (gk >= 0.0) {
      return KappaTilde{numerics::bisect(g, prev_k, k, 1e-8, 1e-13), false};
    }
    prev_k = k;
    prev_g = gk;
  }
  return KappaTilde{0.0, true};
}

OptimalStrategy optimal_strategy(const PreferenceParams& p, const UgSetting& s) {
  p.validate();
  OptimalStrategy out;
  out.degenerate_belief = s.thresholds.is_degenerate() || s.offers.is_degenerate();
  const double half = s.w.half();
  if (p.kappa == 1.0) {
    out.strategy = Strategy{half, 0.0};
    out.region = Region::R1;
    out.threshold_indeterminate = true;
    out.utility = utility(p.alpha, p.kappa, s, half, 0.0);
    return out;
  }
  const double xt1 = constrained_offer(p.kappa, s);
  const double xl2 = constrained_threshold(p.kappa, p.alpha, s.curve, s.w);
  if (xt1 >= xl2) {
    out.strategy = Strategy{xt1, xl2};
    out.region = Region::R1;
    out.utility = utility(p.alpha, p.kappa, s, xt1, xl2);
    return out;
  }
  const double xs = selfish_offer(s);
  const double u3 = utility(p.alpha, p.kappa, s, xs, xl2);
  const auto sym = symmetric_optimum(p.kappa, p.alpha, s, xt1, xl2);
  // exact indifference goes to the symmetric strategy
  if (u3 > sym.utility) {
    out.strategy = Strategy{xs, xl2};
    out.region = Region::R3;
    out.utility = u3;
  } else {
    out.strategy = Strategy{sym.x, sym.x};
    out.region = Region::R2;
    out.utility = sym.utility;
  }
  return out;
}

SolverOutputs solve(const PreferenceParams& p, const UgSetting& s) {
  p.validate();
  SolverOutputs o;
  o.x_s = selfish_offer(s);
  o.x_tilde1 = constrained_offer(p.kappa, s);
  if (p.kappa < 1.0) {
    o.x_lower2 = constrained_threshold(p.kappa, p.alpha, s.curve, s.w);
    if (o.x_tilde1 < *o.x_lower2) {
      o.x_hat = symmetric_optimum(p.kappa, p.alpha, s, o.x_tilde1, *o.x_lower2).x;
    }
  }
  o.alpha_bar = alpha_bar(s);
  o.alpha_tilde_of_kappa = alpha_tilde(p.kappa, s);
  if (const auto kt = kappa_tilde(p.alpha, s)) {
    o.kappa_tilde_of_alpha = kt->value;
    o.kappa_tilde_never_reached = kt->indifference_never_reached;
  }
  o.optimal = optimal_strategy(p, s);
  return o;
}

int RegionMap::count(Region r) const {
  return static_cast<int>(
      std::count_if(cells.begin(), cells.end(), [r](const RegionCell& c) { return c.region == r; }));
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> out(static_cast<size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

RegionMap region_map(const std::vector<double>& alphas, const std::vector<double>& kappas,
                     const UgSetting& s) {
  if (alphas.empty() || kappas.empty()) throw std::invalid_argument("region map grid is empty");
  RegionMap m;
  m.cells.reserve(alphas.size() * kappas.size());
  for (double k : kappas) {
    for (double a : alphas) {
      PreferenceParams p;
      p.alpha = a;
      p.kappa = k;
      const auto o = optimal_strategy(p, s);
      m.cells.push_back(RegionCell{a, k, o.region, o.strategy});
    }
  }
  m.alpha_bar = alpha_bar(s);
  for (double k : kappas) {
    if (k < 1.0) m.alpha_tilde.push_back(CurvePoint{k, alpha_tilde(k, s)});
  }
  for (double a : alphas) {
    if (!(a > m.alpha_bar)) continue;
    const auto kt = kappa_tilde(a, s);
    if (kt && !kt->indifference_never_reached) m.kappa_tilde.push_back(CurvePoint{a, kt->value});
  }
  return m;
}

Statics comparative_statics(double alpha, const std::vector<double>& kappas, const UgSetting& s) {
  Statics st;
  st.alpha = alpha;
  const auto at = [&](double k) {
    PreferenceParams p;
    p.alpha = alpha;
    p.kappa = k;
    return optimal_strategy(p, s);
  };
  std::vector<OptimalStrategy> sol;
  sol.reserve(kappas.size());
  for (double k : kappas) {
    sol.push_back(at(k));
    st.rows.push_back(StaticsRow{k, sol.back().strategy, sol.back().region});
  }
  for (size_t i = 1; i < kappas.size(); ++i) {
    if (sol[i].region == sol[i - 1].region) continue;
    double lo = kappas[i - 1];
    double hi = kappas[i];
    OptimalStrategy left = sol[i - 1];
    OptimalStrategy right = sol[i];
    while (hi - lo > 1e-7) {
      const double mid = 0.5 * (lo + hi);
      const auto o = at(mid);
      if (o.region == left.region) {
        lo = mid;
        left = o;
      } else {
        hi = mid;
        right = o;
      }
    }
    st.switches.push_back(
        RegionSwitch{0.5 * (lo + hi), left.region, right.region, left.strategy, right.strategy});
  }
  return st;
}

}  // namespace moralug
