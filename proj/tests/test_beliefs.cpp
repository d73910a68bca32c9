#include <cmath>

#include "doctest.h"
#include "moralug/beliefs.hpp"
#include "moralug/numerics.hpp"

using namespace moralug;

TEST_CASE("cdf examples") {
  const auto b = BeliefDistribution::scaled_beta(2, 4, 5);
  CHECK(b.cdf(5.0) == 1.0);
  CHECK(b.cdf(7.0) == 1.0);
  CHECK(b.cdf(0.0) == 0.0);
  // I_0.5(2, 4) as a binomial tail: sum_{j=2..5} C(5, j) / 32
  CHECK(b.cdf(2.5) == doctest::Approx(26.0 / 32.0).epsilon(1e-13));
  CHECK(BeliefDistribution::uniform_on_half(5).cdf(2.0) == doctest::Approx(0.4));
  CHECK_THROWS_AS(b.cdf(-0.1), std::domain_error);
}

TEST_CASE("pdf examples") {
  const auto u = BeliefDistribution::uniform_on_half(5);
  for (double x : {0.0, 1.0, 2.5, 5.0}) CHECK(u.pdf(x) == doctest::Approx(0.2));
  const auto b = BeliefDistribution::scaled_beta(2, 4, 5);
  CHECK(b.pdf(0.0) == 0.0);
  CHECK(b.pdf(1.25) == doctest::Approx(20 * 0.25 * std::pow(0.75, 3) / 5).epsilon(1e-13));
  CHECK(b.pdf(1.25) == doctest::Approx(0.421875).epsilon(1e-13));
  CHECK(b.pdf(6.0) == 0.0);
  CHECK(b.pdf(-1.0) == 0.0);
}

TEST_CASE("property: continuous densities integrate to one") {
  for (const auto& d : {BeliefDistribution::scaled_beta(2, 4, 5), BeliefDistribution::scaled_beta(1.5, 3, 29.4),
                        BeliefDistribution::scaled_beta(5, 1.5, 5), BeliefDistribution::uniform_on_half(5)}) {
    const double mass = numerics::integrate([&](double x) { return d.pdf(x); }, 0.0, d.upper(), 1e-12);
    CHECK(std::abs(mass - (d.cdf(d.upper()) - d.cdf(0.0))) < 1e-8);
  }
}

TEST_CASE("property: cdf is nondecreasing for every kind") {
  const std::vector<BeliefDistribution> kinds{
      BeliefDistribution::scaled_beta(2, 4, 5), BeliefDistribution::uniform_on_half(5),
      BeliefDistribution::always_accept(5), BeliefDistribution::empirical({0.5, 1.0, 1.0, 3.2, 4.9}, 5)};
  for (const auto& d : kinds) {
    double prev = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      const double x = 10.0 * i / 10000.0;
      const double f = d.cdf(x);
      CHECK(f >= prev);
      CHECK(f <= 1.0);
      prev = f;
    }
    CHECK(d.cdf(5.0) == 1.0);
  }
}

TEST_CASE("always-accept beliefs") {
  const auto a = BeliefDistribution::always_accept(5);
  for (double x : {0.0, 0.1, 3.0, 10.0}) CHECK(a.cdf(x) == 1.0);
  CHECK(a.is_degenerate());
  CHECK_FALSE(a.is_continuous());
  // a point mass at zero integrates as h(0)
  CHECK(a.integrate_from([](double y) { return y + 2.0; }, 0.0) == doctest::Approx(2.0));
  CHECK(a.integrate_from([](double y) { return y + 2.0; }, 0.5) == 0.0);
}

TEST_CASE("empirical beliefs") {
  const auto e = BeliefDistribution::empirical({1.0, 2.0, 2.0, 4.0}, 5);
  CHECK(e.cdf(0.5) == 0.0);
  CHECK(e.cdf(1.0) == doctest::Approx(0.25));
  CHECK(e.cdf(2.0) == doctest::Approx(0.75));
  CHECK(e.cdf(4.5) == 1.0);
  CHECK(e.bin_width() == doctest::Approx(0.1));
  // integrals against the step cdf are finite sums over sample points at or above lo
  CHECK(e.integrate_from([](double y) { return y; }, 2.0) == doctest::Approx((2.0 + 2.0 + 4.0) / 4.0));
  // the histogram density has unit mass
  double mass = 0.0;
  for (int i = 0; i < 50; ++i) mass += e.pdf(0.1 * i + 0.05) * 0.1;
  CHECK(mass == doctest::Approx(1.0));
  CHECK_THROWS(BeliefDistribution::empirical({}, 5));
  CHECK_THROWS(BeliefDistribution::empirical({6.0}, 5));
}

TEST_CASE("integrate_from matches direct quadrature for continuous kinds") {
  const auto b = BeliefDistribution::scaled_beta(2, 4, 5);
  const auto h = [](double y) { return std::log(y + 1.0); };
  const double direct = numerics::integrate([&](double y) { return h(y) * b.pdf(y); }, 1.5, 5.0, 1e-13);
  CHECK(b.integrate_from(h, 1.5) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS(BeliefDistribution::scaled_beta(0, 4, 5));
  CHECK_THROWS(BeliefDistribution::scaled_beta(2, 4, 0));
  CHECK_THROWS(BeliefDistribution::uniform_on_half(-1));
}
