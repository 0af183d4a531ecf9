#include <cmath>
#include <random>

#include "doctest.h"

#include "convint/spectral.hpp"

using namespace ci;

namespace {
const double kPi = 3.14159265358979323846;

PeriodicField trig(const Grid& g, int k1, int k2, bool cosine) {
  return PeriodicField::from_function(g, [=](const Point& x) {
    const double a = 2 * kPi * (k1 * x[0] + k2 * x[1]);
    return cosine ? std::cos(a) : std::sin(a);
  });
}

double max_diff(const PeriodicField& a, const PeriodicField& b) { return (a - b).max_abs(); }
}  // namespace

TEST_CASE("grid bookkeeping") {
  const Grid g(2, 16);
  CHECK(g.size() == 256);
  CHECK(g.spec_size() == 16 * 9);
  CHECK(Grid(3, 8).size() == 512);
}

TEST_CASE("spectral derivative of a single mode") {
  const Grid g(2, 32);
  const PeriodicField f = trig(g, 3, -2, false);
  // d/dx1 sin(2 pi (3 x1 - 2 x2)) = 6 pi cos(...)
  CHECK(max_diff(derivative(f, 0), trig(g, 3, -2, true) * (6 * kPi)) < 1e-11);
  CHECK(max_diff(derivative(f, 1), trig(g, 3, -2, true) * (-4 * kPi)) < 1e-11);
  CHECK(max_diff(laplacian(f), f * (-4 * kPi * kPi * 13)) < 1e-9);
}

TEST_CASE("antidivergence of a cosine mode has the closed form") {
  const Grid g(2, 32);
  // R cos(2 pi x1) = (sin(2 pi x1) / (2 pi), 0)
  const VectorField R = anti_divergence(trig(g, 1, 0, true));
  CHECK(max_diff(R[0], trig(g, 1, 0, false) * (1.0 / (2 * kPi))) < 1e-14);
  CHECK(R[1].max_abs() < 1e-14);
  // R is a gradient: curl vanishes
  const VectorField S = anti_divergence(trig(g, 2, 3, false));
  CHECK((derivative(S[0], 1) - derivative(S[1], 0)).max_abs() < 1e-12);
}

TEST_CASE("antidivergence drops the mean") {
  const Grid g(2, 16);
  const PeriodicField f = trig(g, 1, 1, true) + 3.0;
  CHECK(std::abs(project_mean_zero(f).mean()) < 1e-14);
  CHECK(max_diff(divergence(anti_divergence_projected(f)), trig(g, 1, 1, true)) < 1e-13);
}

TEST_CASE("bilinear antidivergence with a constant coefficient reduces to a R f") {
  const Grid g(2, 16);
  const PeriodicField a = PeriodicField::constant(g, 2.5);
  const PeriodicField f = trig(g, 2, 1, false);
  const VectorField B = bilinear_antidiv(a, f);
  const VectorField R = anti_divergence(f);
  for (int c = 0; c < 2; ++c) CHECK(max_diff(B[c], R[c] * 2.5) < 1e-14);
}

TEST_CASE("rescale samples f(sigma x)") {
  const Grid src(2, 8), dst(2, 32);
  const PeriodicField f = trig(src, 1, 2, true);
  CHECK(max_diff(rescale(f, 3, dst), trig(dst, 3, 6, true)) < 1e-13);
  CHECK_THROWS_AS(rescale(f, 16, Grid(2, 16)), UnresolvedField);
}

TEST_CASE("resample is exact for band-limited fields") {
  const PeriodicField f = trig(Grid(2, 8), 2, 1, false);
  CHECK(max_diff(resample(f, Grid(2, 64)), trig(Grid(2, 64), 2, 1, false)) < 1e-14);
  CHECK(max_diff(resample(resample(f, Grid(2, 64)), Grid(2, 8)), f) < 1e-14);
}

TEST_CASE("norms of sin(2 pi x1)") {
  const Grid g(2, 64);
  const PeriodicField f = trig(g, 1, 0, false);
  CHECK(l2_norm(f) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  // sin^4 is a trig polynomial, so grid quadrature is exact: int sin^4 = 3/8
  CHECK(lp_norm(f, 4.0) == doctest::Approx(std::pow(3.0 / 8.0, 0.25)).epsilon(1e-13));
  CHECK(norm(f, NormSpec::Linf()) == doctest::Approx(1.0).epsilon(1e-12));
  // C^1 with the max-over-orders convention: max(1, 2 pi)
  CHECK(norm(f, NormSpec::Ck(1)) == doctest::Approx(2 * kPi).epsilon(1e-10));
  // homogeneous W^{1,2} seminorm: ||grad f||_2 = 2 pi / sqrt 2
  CHECK(norm(f, NormSpec::Wsp_seminorm(1, 2.0)) == doctest::Approx(2 * kPi * std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("unresolved fields are rejected by derivative norms") {
  const Grid g(2, 16);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> N;
  std::vector<double> v(g.size());
  for (auto& x : v) x = N(rng);
  const PeriodicField noise(g, v);
  CHECK_FALSE(is_resolved(noise));
  CHECK_THROWS_AS(norm(noise, NormSpec::Ck(1)), UnresolvedField);
  CHECK_THROWS_AS(norm(noise, NormSpec::Wsp(1, 2.0)), UnresolvedField);
  CHECK_NOTHROW(norm(noise, NormSpec::Lp(2.0)));
  CHECK_THROWS(NormSpec{NormSpec::Kind::Lp, 2.0, 1, false}.validate());
}

TEST_CASE("improved Hoelder gap vanishes for constant a") {
  const Grid g(2, 64);
  const PeriodicField a = PeriodicField::constant(g, 1.5);
  const PeriodicField f = trig(Grid(2, 64), 1, 1, true);
  CHECK(improved_holder_gap(a, f, 4, 2.0) < 1e-12);
}

TEST_CASE("multi-indices of order s") {
  CHECK(multi_indices(2, 2).size() == 3);
  CHECK(multi_indices(3, 2).size() == 6);
}
