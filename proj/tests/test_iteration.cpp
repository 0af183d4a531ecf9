#include <cmath>
#include <set>

#include "doctest.h"

#include "convint/iteration.hpp"
#include "convint/scaling.hpp"

using namespace ci;

TEST_CASE("schedule p_n = N 2^n, delta_n = eps 2^-n") {
  RunConfig rc;
  rc.N = 3;
  rc.eps = 0.4;
  CHECK(rc.p_at(1) == 6);
  CHECK(rc.p_at(2) == 12);
  CHECK(rc.delta_at(1) == doctest::Approx(0.2));
  CHECK(rc.delta_at(3) == doctest::Approx(0.05));
}

TEST_CASE("step configuration is validated") {
  StepConfig sc;
  CHECK_NOTHROW(sc.validate());
  sc.delta = 0.5;
  CHECK_THROWS(sc.validate());
  sc.delta = 0.25;
  sc.p = 0;
  CHECK_THROWS(sc.validate());
  sc.p = 2;
  sc.L = DiffOperator::bilaplacian(2);
  CHECK_THROWS(sc.validate());
}

TEST_CASE("targets must be mean-zero and supported inside (0,1)") {
  TargetDensity td = TargetDensity::single_mode(2);
  CHECK_NOTHROW(validate_target(td, Grid(2, 16)));
  td.terms[0].space = [](const Point& x) { return 1.0 + std::sin(6.283185307179586 * x[0]); };
  CHECK_THROWS_AS(validate_target(td, Grid(2, 16)), std::invalid_argument);
  td = TargetDensity::single_mode(2);
  td.terms[0].eta = SmoothBump(0.0, 0.9, 1.0);
  CHECK_THROWS_AS(validate_target(td, Grid(2, 16)), std::invalid_argument);
}

TEST_CASE("n_max = 0 returns the target untouched") {
  RunConfig rc;
  rc.n_max = 0;
  rc.mode = Mode::identity_check;
  const RunResult r = run(rc);
  CHECK(r.history.empty());
  REQUIRE(r.final_triple);
  const ScalarTimeField rho = rc.target.on(Grid(2, 64));
  CHECK((r.final_triple->rho(0.5) - rho(0.5)).max_abs() == 0.0);
  CHECK(r.final_triple->u(0.5)[0].max_abs() == 0.0);
}

TEST_CASE("identity-check run keeps rho_n = rho~ + sum theta_m") {
  RunConfig rc;
  rc.mode = Mode::identity_check;
  rc.n_max = 1;
  rc.init_grid = 128;
  const RunResult r = run(rc);
  REQUIRE(r.perturbations.size() == 1);
  const Grid g = r.final_triple->grid();
  const ScalarTimeField rho0 = rc.target.on(g);
  for (double t : {0.3, 0.6}) {
    const PeriodicField diff = r.final_triple->rho(t) - rho0(t) - r.perturbations[0]->theta.theta(t);
    CHECK(diff.max_abs() < 1e-12);
  }
}

TEST_CASE("a scaling step shrinks theta, w and R1 below delta") {
  auto prof = make_spatial_profile(2);
  StepConfig sc;
  const ScalingStepResult st = scaling_step(init_bounds(TargetDensity::single_mode(2)), sc, *prof);
  CHECK(st.accepted);
  for (const char* k : {"theta", "w", "R1"}) CHECK(st.est.value(k) <= sc.delta);
  // the rung below the accepted one must miss a target (smallest passing rung)
  if (st.rung > 0) {
    const Exponents ex = choose_exponents(2, sc.p);
    const ParameterSet lower = realize_log(ex, std::log(sc.lambda0) + (st.rung - 1) * std::log(sc.growth));
    const ScalingEstimate e = estimate_step(init_bounds(TargetDensity::single_mode(2)), lower, *prof);
    const bool misses = e.value("theta") > sc.delta || e.value("w") > sc.delta || e.value("R1") > sc.delta ||
                        !check_conditions(lower).all_pass();
    CHECK(misses);
  }
}

TEST_CASE("scaling estimates decay like lambda^-gamma") {
  auto prof = make_spatial_profile(2);
  const Exponents ex = choose_exponents(2, 2);
  const ScalingStudy st = scaling_study("theta", {16.0, 64.0, 256.0}, ex, init_bounds(TargetDensity::single_mode(2)), *prof);
  CHECK(st.pass);
  CHECK(st.fit.slope <= -0.05);
  CHECK_THROWS(scaling_study("theta", {16.0, 64.0}, ex, init_bounds(TargetDensity::single_mode(2)), *prof));
}

TEST_CASE("log-log fit recovers an exact power law") {
  const LogLogFit f = fit_loglog({0.0, 1.0, 2.0, 3.0}, {5.0, 4.5, 4.0, 3.5});
  CHECK(f.slope == doctest::Approx(-0.5));
  CHECK(f.intercept == doctest::Approx(5.0));
  CHECK(f.residual < 1e-12);
}

TEST_CASE("test basis: at least 20 distinct smooth functions, supported inside (0,1)") {
  const auto basis = test_basis(2, 20);
  CHECK(basis.size() >= 20);
  std::set<std::tuple<int, int, bool>> seen;
  for (const auto& phi : basis) {
    seen.insert({phi.k[0], phi.k[1], phi.cosine});
    CHECK(phi.value({0.3, 0.2, 0.0}, 0.0) == 0.0);
    CHECK(phi.value({0.3, 0.2, 0.0}, 1.0) == 0.0);
  }
  CHECK(seen.size() == basis.size());
}

TEST_CASE("time quadrature integrates smooth functions") {
  RunResult empty;
  const auto q = time_quadrature(empty, 0.1, 0.9, 16, 2);
  double s0 = 0.0, s5 = 0.0;
  for (const auto& [t, w] : q) {
    s0 += w;
    s5 += w * std::pow(t, 5);
  }
  CHECK(s0 == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(s5 == doctest::Approx((std::pow(0.9, 6) - std::pow(0.1, 6)) / 6.0).epsilon(1e-13));
}
