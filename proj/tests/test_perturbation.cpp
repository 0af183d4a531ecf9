#include <cmath>

#include "doctest.h"

#include "convint/defect.hpp"
#include "convint/iteration.hpp"
#include "convint/perturbation.hpp"

using namespace ci;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("chebyshev nodes span the interval") {
  const auto x = chebyshev_nodes(0.2, 0.6, 8);
  REQUIRE(x.size() == 9);
  CHECK(std::min(x.front(), x.back()) == doctest::Approx(0.2));
  CHECK(std::max(x.front(), x.back()) == doctest::Approx(0.6));
}

TEST_CASE("chebyshev interpolation reproduces polynomials and their derivatives") {
  const Grid g(2, 8);
  const PeriodicField F = PeriodicField::from_function(g, [](const Point& x) { return std::cos(2 * kPi * x[1]); });
  // p(t) = t^3 - t, degree 3 < 6 nodes
  const ScalarTimeField f = chebyshev_sample([&](double t) { return F * (t * t * t - t); }, g, 0.1, 0.9, 6, 2);
  for (double t : {0.15, 0.33, 0.8}) {
    CHECK((f(t) - F * (t * t * t - t)).max_abs() < 1e-12);
    CHECK((f(t, 1) - F * (3 * t * t - 1)).max_abs() < 1e-10);
    CHECK((f(t, 2) - F * (6 * t)).max_abs() < 1e-8);
  }
  CHECK(f(0.95).max_abs() == 0.0);
}

TEST_CASE("defect decomposition rejects support touching the time boundary") {
  const Grid g(2, 8);
  VectorTimeField R = VectorTimeField::zero(g, 2);
  R.t_lo = 0.0;
  R.t_hi = 0.5;
  R.fn = [g](double, int) { return VectorField::zeros(g, 2); };
  CHECK_THROWS_AS(decompose_defect(R), std::invalid_argument);
}

TEST_CASE("perturbation pieces of a small identity-check step") {
  auto prof = make_spatial_profile(2);
  const DefectTriple tr = init_triple(TargetDensity::single_mode(2), Grid(2, 64));
  const Exponents ex = choose_exponents(2, 2);
  const ParameterSet ps = realize_override(ex, 1, 2.0, 8.0);
  const Grid g(2, 128);
  auto blocks = std::make_shared<const MikadoSet>(build_mikado_set(prof, 1, 2.0, g));
  const Perturbation P = build_perturbation(tr.R, blocks, ps);
  REQUIRE(P.Rk.size() == 2);
  // R = eta'(t) R sin(2 pi x1) has no second component
  CHECK(P.Rk[1].field(0.5).max_abs() < 1e-14);
  // w = sum g_k W_k is divergence free and theta has zero mean at every t
  for (double t : {0.2, 0.4, 0.55, 0.7}) {
    CHECK(divergence(P.w.eval(t)).max_abs() < 1e-8 * (1.0 + P.w.eval(t)[0].max_abs() + P.w.eval(t)[1].max_abs()));
    CHECK(std::abs(P.theta.theta(t).mean()) < 1e-12);
  }
}

TEST_CASE("the unperturbed triple solves its defect equation") {
  const DefectTriple tr = init_triple(TargetDensity::two_mode(2), Grid(2, 32));
  for (double t : {0.05, 0.3, 0.5, 0.77}) CHECK(residual_at(tr, t) < 1e-12);
}

TEST_CASE("one identity-check step: telescoping, corrector cancellation, post-step residual") {
  auto prof = make_spatial_profile(2);
  const DefectTriple tr = init_triple(TargetDensity::two_mode(2), Grid(2, 64));
  StepConfig sc;
  sc.mode = Mode::identity_check;
  sc.sigma = 1;
  sc.mu = 2.0;
  sc.kappa = 8.0;
  const FieldStepResult r = field_step(tr, sc, prof, 128);
  REQUIRE(r.P);
  const auto times = probe_times(r.P->prof, tr.R.t_lo, tr.R.t_hi, 10);
  CHECK(times.size() >= 6);
  for (double t : times) {
    CAPTURE(t);
    CHECK(telescoping_at(*r.P, *r.parts, t) < 1e-8);
    CHECK(o3_cancellation_at(*r.P, *r.parts, t) < 1e-8);
    CHECK(residual_at(r.out, t) < 1e-5);
  }
}

TEST_CASE("differential operators") {
  const Grid g(2, 16);
  const PeriodicField f = PeriodicField::from_function(g, [](const Point& x) { return std::sin(2 * kPi * x[0]); });
  const double k2 = 4 * kPi * kPi;
  CHECK((DiffOperator::laplacian(2).apply(f) - f * (-k2)).max_abs() < 1e-10);
  CHECK((DiffOperator::bilaplacian(2).apply(f) - f * (k2 * k2)).max_abs() < 1e-7);
  CHECK(DiffOperator::bilaplacian(2).order() == 4);
}
