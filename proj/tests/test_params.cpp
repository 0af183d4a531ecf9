#include <cmath>

#include "doctest.h"

#include "convint/params.hpp"
#include "convint/rational.hpp"

using namespace ci;

TEST_CASE("rational arithmetic is exact") {
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational::parse("0.09") == Rational(9, 100));
  CHECK(Rational::parse("-3/2") == Rational(-3, 2));
  CHECK(Rational(7, 2).floor() == 3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(1, 10) < Rational(1, 9));
  CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("exponents for d = 2, p = 2") {
  const Exponents ex = choose_exponents(2, 2);
  CHECK(ex.alpha == Rational(9, 100));
  CHECK(ex.gamma == Rational(1, 10));
  CHECK(ex.r == Rational(21, 20));
}

TEST_CASE("chosen exponents pass and respect the recipe") {
  for (int d : {2, 3})
    for (int p : {1, 2, 3, 4, 8}) {
      const Exponents ex = choose_exponents(d, p);
      CAPTURE(d);
      CAPTURE(p);
      CHECK(check_conditions(ex).all_pass());
      // gamma = min(1/5, (d-1)/(5p)), alpha < (d - 1/2)/(2p^2 + 2dp), 1 < r < (d-1)/(d-1-gamma)
      const Rational g_expect = std::min(Rational(1, 5), Rational(d - 1, 5 * p));
      CHECK(ex.gamma == g_expect);
      CHECK(ex.alpha < (Rational(d) - Rational(1, 2)) / Rational(2 * p * p + 2 * d * p));
      CHECK(ex.alpha > Rational(0));
      CHECK(ex.r > Rational(1));
      CHECK(ex.r < Rational(d - 1) / (Rational(d - 1) - ex.gamma));
    }
}

TEST_CASE("exponent checks do not depend on lambda") {
  const Exponents ex = choose_exponents(2, 2);
  for (double lam : {2.0, 10.0, 100.0}) {
    const ConditionReport rep = check_conditions(ex, lam);
    for (const auto& r : rep.rows) CHECK(r.pass_exact);
  }
}

TEST_CASE("alpha bound shrinks with p") {
  Rational prev(1);
  for (int p : {1, 2, 4, 8}) {
    const Exponents ex = choose_exponents(2, p);
    CHECK(ex.alpha < prev);
    prev = ex.alpha;
  }
}

TEST_CASE("an infeasible r is rejected") {
  Exponents ex = choose_exponents(2, 2);
  ex.r = Rational(2);
  CHECK_FALSE(check_conditions(ex).all_pass());
}

TEST_CASE("realize follows the parameter table") {
  const Exponents ex = choose_exponents(2, 2);
  const ParameterSet ps = realize(ex, 64.0);
  CHECK(ps.mu == doctest::Approx(64.0));
  CHECK(ps.sigma == static_cast<std::int64_t>(std::ceil(std::pow(64.0, 0.2) - 1e-12)));
  // ln kappa = (d - 2 gamma)/alpha ln lambda = 1.8/0.09 ln 64
  CHECK(ps.log_kappa == doctest::Approx(20.0 * std::log(64.0)).epsilon(1e-12));
  CHECK(ps.kappa >= 2.0);
}

TEST_CASE("realize rejects lambda <= 1 and identity overrides need kappa >= d") {
  const Exponents ex = choose_exponents(2, 1);
  CHECK_THROWS_AS(realize(ex, 1.0), ParameterError);
  CHECK_THROWS_AS(realize_override(ex, 2, 8.0, 1.5), ParameterError);
  const ParameterSet ps = realize_override(ex, 2, 8.0, 8.0);
  CHECK(ps.sigma == 2);
  CHECK(ps.kappa == 8.0);
  CHECK(ps.mode == Mode::identity_check);
}

TEST_CASE("numeric conditions survive huge lambda") {
  const ParameterSet ps = realize_log(choose_exponents(2, 4), 20000.0);
  CHECK(check_conditions(ps).all_pass());
}
