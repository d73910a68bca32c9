#include <cmath>
#include <random>

#include "doctest.h"
#include "moralug/oracle.hpp"
#include "moralug/ug_solver.hpp"

using namespace moralug;

TEST_CASE("grid points cover [0, w]") {
  const auto pts = GridSpec::square(0.3).points(Endowment(1.0));
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
  CHECK(pts.size() == 5);
  CHECK_THROWS(GridSpec::square(0.0).points(Endowment(1.0)));
}

TEST_CASE("brute force with always-accept beliefs and no preferences") {
  const auto c = PayoffCurve::crra(0.05);
  const auto f = BeliefDistribution::always_accept(5);
  const auto g = brute_force_ug(PreferenceParams{}, c, f, f, Endowment(10), GridSpec::square(0.05));
  CHECK(g.strategy.x1 == 0.0);
  CHECK(g.strategy.x2 == 0.0);
  CHECK(g.utility == doctest::Approx(c.value(10.0)).epsilon(1e-12));
}

TEST_CASE("diagonal grid optimum matches the symmetric solver") {
  const auto s = UgSetting::baseline();
  const double step = 0.025;
  const auto g = brute_force_ug(PreferenceParams{0.5, 0, 0.6, 0}, s.curve, s.thresholds, s.offers, s.w,
                                GridSpec::diagonal(step));
  const auto sym = symmetric_optimum(0.6, 0.5, s);
  CHECK(g.strategy.x1 == g.strategy.x2);
  CHECK(std::abs(g.strategy.x1 - sym.x) <= step + 1e-9);
  // and the full square agrees
  const auto sq = brute_force_ug(PreferenceParams{0.5, 0, 0.6, 0}, s.curve, s.thresholds, s.offers, s.w,
                                 GridSpec::square(step));
  CHECK(sq.strategy.x1 == sq.strategy.x2);
  CHECK(std::abs(sq.strategy.x1 - sym.x) <= step + 1e-9);
}

TEST_CASE("property: no grid cell beats the analytic optimum") {
  const auto s = UgSetting::baseline();
  const UgOracle oracle(s.curve, s.thresholds, s.offers, s.w, GridSpec::square(0.025));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(-1.0, 3.0), uk(0.0, 0.98);
  for (int i = 0; i < 300; ++i) {
    const PreferenceParams p{ua(rng), 0.0, uk(rng), 0.0};
    const auto g = oracle.maximize(p.alpha, p.kappa);
    const auto opt = optimal_strategy(p, s);
    const double ug = eval_expected_utility(p, s.curve, s.thresholds, s.offers, g.strategy, s.w);
    CAPTURE(p.alpha);
    CAPTURE(p.kappa);
    CHECK(opt.utility >= ug - 1e-6);
    // the grid is within a first-order step of the optimum
    CHECK(ug >= opt.utility - 0.05);
  }
}

TEST_CASE("dictator brute force examples") {
  const auto lg = PayoffCurve::shifted_log();
  const Endowment w(58.8);
  CHECK(brute_force_dg(PreferenceParams{0.4, 0, 0, 0}, lg, w, 0.01).transfer == 0.0);
  CHECK(brute_force_dg(PreferenceParams{0.13, 0.22, 0.26, 0}, lg, w, 0.01).transfer ==
        doctest::Approx(22.16).epsilon(0.01 / 22.16));
  CHECK(std::abs(brute_force_dg(PreferenceParams{0, 0, 1, 0}, lg, w, 0.01).transfer - 29.4) <= 0.01 + 1e-9);
}

TEST_CASE("first-order residuals vanish at the analytic optimum") {
  const auto s = UgSetting::baseline();
  SUBCASE("offer component at the constrained offer") {
    const double k = 0.3;
    const double xt = constrained_offer(k, s);
    const auto r = foc_residual(PreferenceParams{0.2, 0, k, 0}, s.curve, s.thresholds, s.offers, s.w,
                                Strategy{xt, 0.5 * xt});  // x2 below x1 keeps the universalization term
    CHECK(std::abs(r.offer) < 1e-4);
    CHECK(std::abs(r.grad_offer) < 1e-4);
  }
  SUBCASE("threshold component at the constrained threshold") {
    const double k = 0.3, a = 0.8;
    const double xl = constrained_threshold(k, a, s.curve, s.w);
    const auto r = foc_residual(PreferenceParams{a, 0, k, 0}, s.curve, s.thresholds, s.offers, s.w,
                                Strategy{0.5, xl});
    CHECK(std::abs(r.threshold) < 1e-4);
    CHECK(std::abs(r.grad_threshold) < 1e-4);
  }
}

TEST_CASE("property: analytic derivatives match finite differences off the optimum") {
  const auto s = UgSetting::baseline();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ua(-1.0, 3.0), uk(0.0, 0.95), ux(0.2, 4.8);
  int checked = 0;
  while (checked < 100) {
    const PreferenceParams p{ua(rng), 0.0, uk(rng), 0.0};
    const Strategy x{ux(rng), ux(rng)};
    if (std::abs(x.x1 - x.x2) < 0.01) continue;
    const auto r = foc_residual(p, s.curve, s.thresholds, s.offers, s.w, x);
    CHECK(std::abs(r.offer) < 1e-4);
    CHECK(std::abs(r.threshold) < 1e-4);
    CHECK(std::abs(r.grad_offer) + std::abs(r.grad_threshold) > 0.0);
    ++checked;
  }
}

TEST_CASE("first-order residual refuses the diagonal and point masses") {
  const auto s = UgSetting::baseline();
  const PreferenceParams p{0.5, 0, 0.5, 0};
  CHECK_THROWS_AS(foc_residual(p, s.curve, s.thresholds, s.offers, s.w, Strategy{2, 2}), std::domain_error);
  const auto f = BeliefDistribution::always_accept(5);
  CHECK_THROWS_AS(foc_residual(p, s.curve, f, f, s.w, Strategy{1, 3}), std::invalid_argument);
}

TEST_CASE("property: halving the step moves the argmax by at most one coarse step") {
  const auto s = UgSetting::baseline();
  const double coarse = 0.05;
  const UgOracle a(s.curve, s.thresholds, s.offers, s.w, GridSpec::square(coarse));
  const UgOracle b(s.curve, s.thresholds, s.offers, s.w, GridSpec::square(coarse / 2));
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> ua(-1.0, 3.0), uk(0.0, 0.98);
  int n = 0;
  while (n < 50) {
    const double al = ua(rng), ka = uk(rng);
    // skip draws sitting on a regime switch, where two distant cells tie
    const auto ga = a.maximize(al, ka);
    const auto gb = b.maximize(al, ka);
    const auto opt = optimal_strategy(PreferenceParams{al, 0, ka, 0}, s);
    if (std::abs(symmetric_advantage(ka, al, s)) < 1e-3 && opt.region != Region::R1) continue;
    CAPTURE(al);
    CAPTURE(ka);
    CHECK(std::abs(ga.strategy.x1 - gb.strategy.x1) <= coarse + 1e-9);
    CHECK(std::abs(ga.strategy.x2 - gb.strategy.x2) <= coarse + 1e-9);
    ++n;
  }
}

TEST_CASE("property: the oracle's diagonal jump is the universalization payoff") {
  const auto s = UgSetting::baseline();
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ux(0.1, 4.9), uk(0.05, 1.0), ua(-1.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double x = ux(rng);
    const PreferenceParams p{ua(rng), 0, uk(rng), 0};
    const double on = oracle_utility(p, s.curve, s.thresholds, s.offers, Strategy{x, x}, s.w);
    const double off = oracle_utility(p, s.curve, s.thresholds, s.offers, Strategy{x, x + 1e-10}, s.w);
    CHECK(std::abs((on - off) - p.kappa * (s.curve.value(10 - x) + s.curve.value(x))) < 1e-8);
  }
}
