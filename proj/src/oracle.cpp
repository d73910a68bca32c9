#include "moralug/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moralug {

namespace {

constexpr int kSubPanels = 16;

// Simpson on [a, b] with `panels` (even) cells
template <class F>
double simpson(const F& f, double a, double b, int panels) {
  if (!(b > a)) return 0.0;
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += f(a + k * h) * ((k % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

// int_{lo}^{upper} g dF for any belief kind, using only its pdf or sample
template <class F>
double tail_integral(const BeliefDistribution& d, const F& g, double lo, double hi, int panels) {
  lo = std::max(lo, 0.0);
  switch (d.kind()) {
    case BeliefDistribution::Kind::ScaledBeta:
    case BeliefDistribution::Kind::UniformOnHalf:
      return simpson([&](double y) { return g(y) * d.pdf(y); }, lo, std::min(hi, d.upper()), panels);
    case BeliefDistribution::Kind::AlwaysAccept:
      return lo <= 0.0 ? g(0.0) : 0.0;
    case BeliefDistribution::Kind::Empirical: {
      double s = 0.0;
      for (double y : d.sample()) {
        if (y >= lo && y < hi) s += g(y);
      }
      return s / static_cast<double>(d.sample().size());
    }
  }
  return 0.0;
}

}  // namespace

std::vector<double> GridSpec::points(const Endowment& w) const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const auto n = static_cast<long>(std::floor(w.w / step + 1e-9));
  std::vector<double> pts;
  pts.reserve(static_cast<size_t>(n) + 2);
  for (long i = 0; i <= n; ++i) pts.push_back(std::min(static_cast<double>(i) * step, w.w));
  if (pts.back() < w.w - 1e-12) pts.push_back(w.w);
  return pts;
}

UgOracle::UgOracle(PayoffCurve curve, BeliefDistribution thresholds, BeliefDistribution offers,
                   Endowment w, GridSpec grid)
    : curve_(curve), w_(w), grid_(grid), points_(grid.points(w)) {
  const size_t n = points_.size();
  const double ww = w_.w;
  const double half = w_.half();
  proposer_.resize(n);
  moral_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double keep = curve_.value(ww - points_[i]);
    proposer_[i] = keep * thresholds.cdf(points_[i]);
    moral_[i] = keep + curve_.value(points_[i]);
  }
  // tails accumulate from the top; each grid cell below w/2 is one Simpson
  // block, atoms are counted in the cell containing them (left-closed)
  tail_own_.assign(n, 0.0);
  tail_oth_.assign(n, 0.0);
  const auto own = [&](double y) { return curve_.value(y); };
  const auto oth = [&](double y) { return curve_.value(ww - y); };
  double acc_own = 0.0, acc_oth = 0.0;
  for (size_t k = n; k-- > 0;) {
    const double a = points_[k];
    if (a >= half) continue;
    // the final block runs to the end of the support; atoms at w/2 are
    // counted with the last cell
    const double b = (k + 1 < n) ? std::min(points_[k + 1], half) : half;
    const double b_atoms = (b >= half) ? half + 1.0 : b;
    acc_own += tail_integral(offers, own, a, b_atoms, 2 * kSubPanels);
    acc_oth += tail_integral(offers, oth, a, b_atoms, 2 * kSubPanels);
    tail_own_[k] = acc_own;
    tail_oth_[k] = acc_oth;
  }
}

double UgOracle::utility(double alpha, double kappa, size_t i, size_t j) const {
  double u = (1.0 - kappa) * proposer_[i] + (1.0 - kappa + alpha) * tail_own_[j] -
             alpha * tail_oth_[j];
  if (points_[i] >= points_[j]) u += kappa * moral_[i];
  return u;
}

GridOptimum UgOracle::maximize(double alpha, double kappa) const {
  const size_t n = points_.size();
  GridOptimum best;
  best.utility = -INFINITY;
  size_t bi = 0, bj = 0;
  const bool diag = grid_.domain == GridSpec::Domain::Diagonal;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = diag ? i : 0; j < (diag ? i + 1 : n); ++j) {
      const double u = utility(alpha, kappa, i, j);
      if (u > best.utility) {
        best.utility = u;
        bi = i;
        bj = j;
      }
    }
  }
  best.strategy = Strategy{points_[bi], points_[bj]};
  int near = 0;
  for (size_t i = 0; i < n && near < 2; ++i) {
    for (size_t j = diag ? i : 0; j < (diag ? i + 1 : n); ++j) {
      if (utility(alpha, kappa, i, j) >= best.utility - 1e-12) ++near;
    }
  }
  best.unique = near == 1;
  return best;
}

GridOptimum brute_force_ug(const PreferenceParams& p, const PayoffCurve& curve,
                           const BeliefDistribution& thresholds, const BeliefDistribution& offers,
                           const Endowment& w, const GridSpec& grid) {
  p.validate();
  return UgOracle(curve, thresholds, offers, w, grid).maximize(p.alpha, p.kappa);
}

double oracle_utility(const PreferenceParams& p, const PayoffCurve& curve,
                      const BeliefDistribution& thresholds, const BeliefDistribution& offers,
                      const Strategy& s, const Endowment& w, int panels) {
  s.validate(w.w);
  const double ww = w.w;
  const double k = p.kappa;
  double u = (1.0 - k) * curve.value(ww - s.x1) * thresholds.cdf(s.x1);
  u += tail_integral(
      offers,
      [&](double y) { return (1.0 - k + p.alpha) * curve.value(y) - p.alpha * curve.value(ww - y); },
      s.x2, w.half() + 1.0, panels);
  if (s.x1 >= s.x2) u += k * (curve.value(ww - s.x1) + curve.value(s.x1));
  return u;
}

DgOptimum brute_force_dg(const PreferenceParams& p, const PayoffCurve& curve, const Endowment& w,
                         double step) {
  const auto pts = GridSpec::square(step).points(w);
  DgOptimum best{0.0, -INFINITY};
  for (double x : pts) {
    const double u = dg_objective(p, curve, x, w);
    if (u > best.utility) best = DgOptimum{x, u};
  }
  return best;
}

double analytic_offer_derivative(const PreferenceParams& p, const PayoffCurve& curve,
                                 const BeliefDistribution& thresholds, const Endowment& w,
                                 const Strategy& x) {
  const double ww = w.w;
  const double k = p.kappa;
  double d = (1.0 - k) * (-curve.derivative(ww - x.x1) * thresholds.cdf(x.x1) +
                          curve.value(ww - x.x1) * thresholds.pdf(x.x1));
  if (x.x1 >= x.x2) d += k * (curve.derivative(x.x1) - curve.derivative(ww - x.x1));
  return d;
}

double analytic_threshold_derivative(const PreferenceParams& p, const PayoffCurve& curve,
                                     const BeliefDistribution& offers, const Endowment& w,
                                     const Strategy& x) {
  if (x.x2 >= w.half()) return 0.0;
  return -offers.pdf(x.x2) *
         ((1.0 - p.kappa + p.alpha) * curve.value(x.x2) - p.alpha * curve.value(w.w - x.x2));
}

FocResidual foc_residual(const PreferenceParams& p, const PayoffCurve& curve,
                         const BeliefDistribution& thresholds, const BeliefDistribution& offers,
                         const Endowment& w, const Strategy& x) {
  if (!thresholds.is_continuous() || !offers.is_continuous()) {
    throw std::invalid_argument("first-order conditions need beliefs with a density");
  }
  const double h = 1e-5 * w.w;
  if (std::abs(x.x1 - x.x2) <= h) throw std::domain_error("nondifferentiable point: diagonal");
  if (x.x1 < h || x.x1 > w.w - h || x.x2 < h || x.x2 > w.w - h) {
    throw std::domain_error("first-order conditions need an interior point");
  }
  const auto u = [&](double a, double b) {
    return eval_expected_utility(p, curve, thresholds, offers, Strategy{a, b}, w);
  };
  FocResidual r;
  r.grad_offer = (u(x.x1 + h, x.x2) - u(x.x1 - h, x.x2)) / (2.0 * h);
  r.grad_threshold = (u(x.x1, x.x2 + h) - u(x.x1, x.x2 - h)) / (2.0 * h);
  r.offer = r.grad_offer - analytic_offer_derivative(p, curve, thresholds, w, x);
  r.threshold = r.grad_threshold - analytic_threshold_derivative(p, curve, offers, w, x);
  return r;
}

}  // namespace moralug
