#include <cmath>
#include <functional>

#include "doctest.h"

#include "convint/bump.hpp"
#include "convint/temporal.hpp"

using namespace ci;

namespace {
// composite Simpson on [a, b]
double simpson(const std::function<double(double)>& f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}
}  // namespace

TEST_CASE("smooth bump basics") {
  const SmoothBump b(0.0, 1.0, 1.0);
  CHECK(b(0.5) == doctest::Approx(1.0));
  CHECK(b(0.0) == 0.0);
  CHECK(b(1.2) == 0.0);
  CHECK(b(0.3) == doctest::Approx(b(0.7)).epsilon(1e-14));
  // derivative against a centred difference
  const double x = 0.37, h = 1e-5;
  CHECK(b.derivative(x, 1) == doctest::Approx((b(x + h) - b(x - h)) / (2 * h)).epsilon(1e-8));
  const auto t = b.taylor_derivs(x, 4);
  const auto d = b.derivs(x);
  for (int k = 0; k <= 4; ++k) CHECK(t[k] == doctest::Approx(d[k]).epsilon(1e-10));
  CHECK_THROWS(SmoothBump(1.0, 0.0));
}

TEST_CASE("base profile is normalized, odd about its midpoint and supported in (1/8, 7/8)") {
  const BumpProfile& G = make_bump_profile();
  CHECK(simpson([&](double t) { return G(t) * G(t); }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(simpson([&](double t) { return G(t); }, 0.0, 1.0)) < 1e-12);
  CHECK(G(0.1) == 0.0);
  CHECK(G(0.9) == 0.0);
  CHECK(G(0.3) == doctest::Approx(-G(0.7)).epsilon(1e-12));
  CHECK(G.cumulative_sq(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(G.cumulative_sq(0.5) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("g~_k g_k has unit integral and the directions never overlap in time") {
  const TimeScales ts = TimeScales::make(2, 8.0, 2.0, 0.09);
  const auto [gt0, g0] = g_profiles(0, ts);
  const auto [gt1, g1] = g_profiles(1, ts);
  CHECK(simpson([&](double t) { return gt0(t) * g0(t); }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(simpson([&](double t) { return gt1(t) * g1(t); }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  for (int i = 0; i <= 10000; ++i) {
    const double t = i / 10000.0;
    CHECK(g0(t) * g1(t) == 0.0);
  }
}

TEST_CASE("profile amplitudes follow kappa^alpha and kappa^(1-alpha)") {
  const TimeScales ts = TimeScales::make(2, 8.0, 1.0, 0.09);
  const auto [gt, g] = g_profiles(0, ts);
  const BumpProfile& G = make_bump_profile();
  const double t = 0.4 / 8.0;
  CHECK(gt(t) == doctest::Approx(std::pow(8.0, 0.09) * G(0.4)).epsilon(1e-13));
  CHECK(g(t) == doctest::Approx(std::pow(8.0, 0.91) * G(0.4)).epsilon(1e-13));
}

TEST_CASE("h_k is 1/sigma periodic and its derivative matches sigma (g~ g - 1)") {
  const TimeScales ts = TimeScales::make(2, 8.0, 3.0, 0.09);
  const TemporalProfile h = h_corrector(1, ts);
  const TemporalProfile pr(ProfileKind::product, 1, ts);
  for (double t : {0.05, 0.13, 0.21, 0.29}) CHECK(h(t) == doctest::Approx(h(t + 1.0 / 3.0)).epsilon(1e-12));
  for (double t : {0.07, 0.19, 0.24}) {
    const double e = 1e-6;
    CHECK((h(t + e) - h(t - e)) / (2 * e) == doctest::Approx(3.0 * (pr(t) - 1.0)).epsilon(1e-5));
  }
}

TEST_CASE("closed-form L^q norms agree with quadrature") {
  const TimeScales ts = TimeScales::make(2, 8.0, 2.0, 0.09);
  for (ProfileKind kind : {ProfileKind::g_tilde, ProfileKind::g_small, ProfileKind::product}) {
    const TemporalProfile p(kind, 0, ts);
    for (double q : {1.0, 2.0, 3.0}) {
      const double num = std::pow(simpson([&](double t) { return std::pow(std::abs(p(t)), q); }, 0.0, 1.0), 1.0 / q);
      CHECK(p.lq_norm(q) == doctest::Approx(num).epsilon(1e-7));
    }
  }
}

TEST_CASE("log-space scales carry overflowing kappa") {
  const TimeScales ts = TimeScales::from_logs(2, 2000.0, 10.0, 0.09);
  CHECK(std::isinf(ts.kappa));
  const TemporalProfile gt(ProfileKind::g_tilde, 0, ts);
  // ||g~||_2 = kappa^(alpha - 1/2) ||G~||_2 with ||G~||_2 = 1
  CHECK(gt.log_lq_norm(2.0) == doctest::Approx((0.09 - 0.5) * 2000.0).epsilon(1e-12));
  CHECK_THROWS(gt(0.5));
}
