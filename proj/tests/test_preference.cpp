#include <cmath>
#include <random>

#include "doctest.h"
#include "moralug/oracle.hpp"
#include "moralug/preference.hpp"
#include "moralug/ug_solver.hpp"

using namespace moralug;

TEST_CASE("curve values") {
  CHECK(eval_curve(PayoffCurve::shifted_log(), 0.0) == 0.0);
  CHECK(eval_curve(PayoffCurve::linear(), 5.0) == 5.0);
  CHECK(eval_curve(PayoffCurve::crra(0.05), 10.0) == doctest::Approx(std::pow(10.0, 0.95) / 0.95).epsilon(1e-14));
  CHECK(eval_curve(PayoffCurve::crra(0.05), 10.0) == doctest::Approx(9.3814).epsilon(1e-4));
  CHECK_THROWS_AS(eval_curve(PayoffCurve::linear(), -1.0), std::domain_error);
  CHECK_THROWS_AS(PayoffCurve::crra(1.0), std::invalid_argument);
}

TEST_CASE("curve derivative matches a central difference") {
  for (const auto& c : {PayoffCurve::linear(), PayoffCurve::crra(0.05), PayoffCurve::shifted_log()}) {
    for (double x : {0.5, 2.0, 7.0}) {
      const double h = 1e-6;
      CHECK(c.derivative(x) == doctest::Approx((c.value(x + h) - c.value(x - h)) / (2 * h)).epsilon(1e-7));
    }
  }
}

TEST_CASE("property: every curve is zero at zero and strictly increasing") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  for (const auto& c : {PayoffCurve::linear(), PayoffCurve::crra(0.05), PayoffCurve::shifted_log()}) {
    CHECK(c.value(0.0) == 0.0);
    for (int i = 0; i < 1000; ++i) {
      double a = u(rng), b = u(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      CHECK(c.value(b) > c.value(a));
    }
  }
}

TEST_CASE("parameter validation and test box") {
  CHECK_THROWS_AS((PreferenceParams{0, 0, 1.1, 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((PreferenceParams{0, 0, 0.5, -0.1}).validate(), std::invalid_argument);
  CHECK((PreferenceParams{2, -2, 1, 0}).in_test_box());
  CHECK_FALSE((PreferenceParams{2.1, 0, 0.5, 0}).in_test_box());
  CHECK_FALSE((PreferenceParams{0, 0, 1.2, 0}).in_test_box());
  CHECK_THROWS_AS((Strategy{-1, 0}).validate(10), std::domain_error);
  CHECK_THROWS_AS((Strategy{0, 11}).validate(10), std::domain_error);
  CHECK_THROWS(Endowment(0.0));
}

TEST_CASE("expected utility: only the universalization term survives at kappa = 1") {
  const Endowment w(10);
  const auto f = BeliefDistribution::uniform_on_half(5);
  const PreferenceParams p{0.0, 0.0, 1.0, 0.0};
  const double u = eval_expected_utility(p, PayoffCurve::shifted_log(), f, f, Strategy{5, 5}, w);
  CHECK(u == doctest::Approx(2.0 * std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("expected utility: threshold at w/2 leaves the proposer term") {
  const Endowment w(10);
  const auto f = BeliefDistribution::scaled_beta(2, 4, 5);
  const auto c = PayoffCurve::crra(0.05);
  for (double x1 : {0.0, 1.3, 3.0, 4.9}) {
    const double u = eval_expected_utility(PreferenceParams{}, c, f, f, Strategy{x1, 5}, w);
    CHECK(u == doctest::Approx(c.value(10 - x1) * f.cdf(x1)).epsilon(1e-12));
  }
}

TEST_CASE("expected utility agrees with the oracle quadrature") {
  const auto s = UgSetting::baseline();
  const PreferenceParams p{0.5, 0.0, 0.3, 0.0};
  const Strategy x{3, 1};
  const double a = eval_expected_utility(p, s.curve, s.thresholds, s.offers, x, s.w);
  const double b = oracle_utility(p, s.curve, s.thresholds, s.offers, x, s.w);
  CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("property: diagonal jump equals the universalization payoff") {
  const auto s = UgSetting::baseline();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.1, 4.9), uk(0.05, 1.0), ua(-1.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double x1 = ux(rng);
    const PreferenceParams p{ua(rng), 0.0, uk(rng), 0.0};
    const double on = eval_expected_utility(p, s.curve, s.thresholds, s.offers, Strategy{x1, x1}, s.w);
    const double off = eval_expected_utility(p, s.curve, s.thresholds, s.offers, Strategy{x1, x1 + 1e-10}, s.w);
    CHECK(std::abs((on - off) - p.kappa * (s.curve.value(10 - x1) + s.curve.value(x1))) < 1e-8);
  }
}

TEST_CASE("expected utility is continuous across the diagonal when kappa = 0") {
  const auto s = UgSetting::baseline();
  const PreferenceParams p{0.7, 0.0, 0.0, 0.0};
  const double on = eval_expected_utility(p, s.curve, s.thresholds, s.offers, Strategy{2, 2}, s.w);
  const double off = eval_expected_utility(p, s.curve, s.thresholds, s.offers, Strategy{2, 2 + 1e-10}, s.w);
  CHECK(std::abs(on - off) < 1e-8);
}

TEST_CASE("ex-post symmetric utility") {
  const Endowment w(10);
  const auto lin = PayoffCurve::linear();
  SUBCASE("equal split") {
    for (const auto& p : {PreferenceParams{0.3, 0.2, 0.4, 0}, PreferenceParams{2, -1, 1, 0}, PreferenceParams{}}) {
      CHECK(eval_expost_symmetric(p, lin, Strategy{5, 5}, Strategy{5, 5}, w) == doctest::Approx(10.0));
    }
  }
  SUBCASE("rejected offer, then accepting a zero offer") {
    const PreferenceParams p{1.0, 0.0, 0.0, 0.0};
    CHECK(eval_expost_symmetric(p, lin, Strategy{0, 0}, Strategy{0, 10}, w) == doctest::Approx(-10.0));
  }
  SUBCASE("no universalization below the diagonal") {
    // at kappa = 1 with no inequality terms only the self-matching payoff remains
    const PreferenceParams p{0.0, 0.0, 1.0, 0.0};
    for (const auto& other : {Strategy{4, 1}, Strategy{0, 10}, Strategy{6, 6}}) {
      CHECK(eval_expost_symmetric(p, lin, Strategy{2, 3}, other, w) == doctest::Approx(0.0));
      CHECK(eval_expost_symmetric(p, lin, Strategy{3, 2}, other, w) == doctest::Approx(10.0));
    }
  }
}

TEST_CASE("dictator transfer examples") {
  const auto lg = PayoffCurve::shifted_log();
  const Endowment w(58.8);
  CHECK(dg_transfer(PreferenceParams{0.7, 0, 0, 0}, lg, w) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(dg_transfer(PreferenceParams{0.0, 0, 1, 0}, lg, w) == doctest::Approx(29.4).epsilon(1e-6));
  const double closed = (0.48 * 59.8 - 0.78) / 1.26;
  CHECK(dg_transfer(PreferenceParams{0.13, 0.22, 0.26, 0}, lg, w) == doctest::Approx(closed).epsilon(1e-6));
}

TEST_CASE("property: dictator transfer matches the grid and stays below w/2") {
  const auto lg = PayoffCurve::shifted_log();
  const Endowment w(58.8);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ua(0.0, 2.0), ub(-2.0, 1.0), uk(0.0, 1.0);
  const double step = 1e-3 * w.w;
  for (int i = 0; i < 500; ++i) {
    const PreferenceParams p{ua(rng), ub(rng), uk(rng), 0.0};
    const double x = dg_transfer(p, lg, w);
    CHECK(x <= w.half() + 1e-9);
    const auto grid = brute_force_dg(p, lg, w, step);
    CHECK(dg_objective(p, lg, x, w) >= grid.utility - 1e-9);
    CHECK(std::abs(x - grid.transfer) <= step + 1e-9);
  }
}
