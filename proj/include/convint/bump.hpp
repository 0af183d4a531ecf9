#pragma once

#include <array>
#include <vector>

namespace ci {

// exp(beta - beta/(1 - z^2)) with z mapping (lo, hi) onto (-1, 1); peak value 1 at the midpoint.
class SmoothBump {
public:
  SmoothBump(double lo = 0.0, double hi = 1.0, double beta = 1.0);

  double operator()(double x) const { return derivs(x)[0]; }
  // value and derivatives of order 1..4 with respect to x
  std::array<double, 5> derivs(double x) const;
  double derivative(double x, int order) const;
  // derivatives of order 0..max_order via truncated Taylor arithmetic
  std::vector<double> taylor_derivs(double x, int max_order) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double beta() const { return beta_; }

private:
  double lo_, hi_, beta_;
};

}  // namespace ci
