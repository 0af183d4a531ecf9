#include <cmath>
#include <vector>

#include "doctest.h"

#include "convint/mikado.hpp"

using namespace ci;

namespace {
double mean_of_product(const PeriodicField& a, const PeriodicField& b) { return (a * b).mean(); }
}  // namespace

TEST_CASE("profile normalization: int phi^2 = 1 and div Omega = phi") {
  auto prof = make_spatial_profile(2);
  CHECK(prof->phi_lp(2.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(prof->phi_integral()) < 1e-12);
  // d/dy Omega(y) = phi(y): centred difference
  const double y = 0.41, h = 1e-6, yp = y + h, ym = y - h;
  double op[2], om[2];
  prof->omega(&yp, op);
  prof->omega(&ym, om);
  CHECK((op[0] - om[0]) / (2 * h) == doctest::Approx(prof->phi(&y)).epsilon(1e-6));
}

TEST_CASE("d = 2 blocks: direction, mean, normalization, divergence") {
  auto prof = make_spatial_profile(2);
  const int sigma = 1;
  const double mu = 4.0;
  const Grid g(2, mikado_grid_size(*prof, sigma, mu) * 2);
  const MikadoSet set = build_mikado_set(prof, sigma, mu, g);
  REQUIRE(set.size() == 2);
  for (int k = 0; k < 2; ++k) {
    const MikadoBlock& b = set.block(k);
    CAPTURE(k);
    CHECK(std::abs(b.Phi.mean()) < 1e-12);
    CHECK(b.W[1 - k].max_abs() == 0.0);
    CHECK((b.W[k] - b.Phi * mu).max_abs() < 1e-12);
    // constant along x_k
    CHECK(derivative(b.Phi, k).max_abs() < 1e-8 * derivative(b.Phi, 1 - k).max_abs());
    // mean of Phi_k W_k is e_k
    CHECK(mean_of_product(b.Phi, b.W[k]) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK((b.PhiW[k] - b.Phi * b.W[k]).max_abs() < 1e-12);
    // div W = 0 and div Omega = sigma Phi
    CHECK(divergence(b.W).max_abs() < 1e-8 * b.W[k].max_abs());
    CHECK((divergence(b.Omega) - b.Phi * sigma).max_abs() < 1e-6 * b.Phi.max_abs());
  }
}

TEST_CASE("block L^p norms match the closed forms") {
  auto prof = make_spatial_profile(2);
  std::vector<double> w_l1;
  for (double mu : {4.0, 8.0}) {
    const Grid g(2, mikado_grid_size(*prof, 2, mu) * 2);
    const MikadoBlock b = build_mikado_block(*prof, 0, 2, mu, g);
    for (double p : {2.0, 4.0}) {
      CHECK(lp_norm(b.Phi, p) == doctest::Approx(block_phi_lp(*prof, mu, p)).epsilon(1e-6));
      CHECK(lp_norm(b.W[0], p) == doctest::Approx(block_w_lp(*prof, mu, p)).epsilon(1e-6));
      CHECK(lp_norm(b.Omega[1], p) == doctest::Approx(block_omega_lp(*prof, mu, p)).epsilon(1e-6));
    }
    w_l1.push_back(lp_norm(b.W[0], 1.0));
  }
  // ||W||_{L^1} = ||phi||_{L^1} in d = 2 whatever mu. |phi| has kinks, so grid quadrature is only
  // second order; at equal points per sigma mu both samplings coincide
  CHECK(w_l1[0] == doctest::Approx(w_l1[1]).epsilon(1e-12));
  CHECK(w_l1[0] == doctest::Approx(prof->phi_lp(1.0)).epsilon(1e-2));
}

TEST_CASE("blocks are 1/sigma periodic") {
  auto prof = make_spatial_profile(2);
  const int sigma = 2;
  const Grid g(2, mikado_grid_size(*prof, sigma, 4.0));
  const MikadoBlock b = build_mikado_block(*prof, 1, sigma, 4.0, g);
  const int n = g.n, s = n / sigma;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(b.Phi[i * n + j] - b.Phi[((i + s) % n) * n + j]));
  CHECK(worst == 0.0);
}

TEST_CASE("too coarse a grid is refused") {
  auto prof = make_spatial_profile(2);
  CHECK_THROWS_AS(build_mikado_block(*prof, 0, 4, 16.0, Grid(2, 64)), UnresolvedField);
  CHECK_THROWS(build_mikado_block(*prof, 2, 1, 4.0, Grid(2, 256)));
}

TEST_CASE("d = 3 blocks satisfy the same identities") {
  auto prof = make_spatial_profile(3);
  const double mu = 2.0;
  const Grid g(3, mikado_grid_size(*prof, 1, mu));
  const MikadoBlock b = build_mikado_block(*prof, 2, 1, mu, g);
  CHECK(std::abs(b.Phi.mean()) < 1e-12);
  CHECK(b.W[0].max_abs() == 0.0);
  CHECK(b.W[1].max_abs() == 0.0);
  CHECK(mean_of_product(b.Phi, b.W[2]) == doctest::Approx(1.0).epsilon(1e-8));
}
