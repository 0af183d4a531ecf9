#include "convint/bump.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ci {

SmoothBump::SmoothBump(double lo, double hi, double beta) : lo_(lo), hi_(hi), beta_(beta) {
  if (!(hi > lo) || !(beta > 0)) throw std::invalid_argument("SmoothBump: need lo < hi and beta > 0");
}

std::array<double, 5> SmoothBump::derivs(double x) const {
  std::array<double, 5> out{0, 0, 0, 0, 0};
  const double s = 2.0 / (hi_ - lo_);
  const double z = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  const double q = 1.0 - z * z;
  if (q <= 0.0) return out;
  const double psi = beta_ - beta_ / q;
  if (psi < -700.0) return out;
  const double b = std::exp(psi);

  // derivatives of r = 1/q in z, with q' = -2z, q'' = -2, q''' = 0
  const double q1 = -2.0 * z, q2 = -2.0;
  const double iq = 1.0 / q, iq2 = iq * iq, iq3 = iq2 * iq, iq4 = iq3 * iq, iq5 = iq4 * iq;
  const double r1 = -q1 * iq2;
  const double r2 = -q2 * iq2 + 2.0 * q1 * q1 * iq3;
  const double r3 = 6.0 * q1 * q2 * iq3 - 6.0 * q1 * q1 * q1 * iq4;
  const double r4 = 6.0 * q2 * q2 * iq3 - 36.0 * q1 * q1 * q2 * iq4 + 24.0 * q1 * q1 * q1 * q1 * iq5;
  const double p1 = -beta_ * r1, p2 = -beta_ * r2, p3 = -beta_ * r3, p4 = -beta_ * r4;

  const double e1 = p1;
  const double e2 = p2 + p1 * p1;
  const double e3 = p3 + 3.0 * p1 * p2 + p1 * p1 * p1;
  const double e4 = p4 + 4.0 * p1 * p3 + 3.0 * p2 * p2 + 6.0 * p1 * p1 * p2 + p1 * p1 * p1 * p1;
  out[0] = b;
  out[1] = e1 * b * s;
  out[2] = e2 * b * s * s;
  out[3] = e3 * b * s * s * s;
  out[4] = e4 * b * s * s * s * s;
  return out;
}

double SmoothBump::derivative(double x, int order) const {
  if (order < 0) throw std::out_of_range("SmoothBump: negative derivative order");
  if (order <= 4) return derivs(x)[order];
  return taylor_derivs(x, order)[order];
}

std::vector<double> SmoothBump::taylor_derivs(double x, int max_order) const {
  const int N = max_order;
  std::vector<double> out(N + 1, 0.0);
  const double s = 2.0 / (hi_ - lo_);
  const double z = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
  const double q0 = 1.0 - z * z;
  if (q0 <= 0.0 || beta_ - beta_ / q0 < -700.0) return out;
  // series in the local variable h = x - x0: z = z0 + s h, q = 1 - z^2
  std::vector<double> q(N + 1, 0.0), r(N + 1, 0.0), psi(N + 1, 0.0), e(N + 1, 0.0);
  q[0] = q0;
  if (N >= 1) q[1] = -2.0 * z * s;
  if (N >= 2) q[2] = -s * s;
  r[0] = 1.0 / q0;
  for (int n = 1; n <= N; ++n) {
    double acc = 0.0;
    for (int j = 1; j <= std::min(n, 2); ++j) acc += q[j] * r[n - j];
    r[n] = -acc / q0;
  }
  psi[0] = beta_ - beta_ * r[0];
  for (int n = 1; n <= N; ++n) psi[n] = -beta_ * r[n];
  e[0] = std::exp(psi[0]);
  for (int n = 1; n <= N; ++n) {
    double acc = 0.0;
    for (int j = 1; j <= n; ++j) acc += j * psi[j] * e[n - j];
    e[n] = acc / n;
  }
  double fact = 1.0;
  for (int n = 0; n <= N; ++n) {
    if (n > 0) fact *= n;
    out[n] = fact * e[n];
  }
  return out;
}

}  // namespace ci
