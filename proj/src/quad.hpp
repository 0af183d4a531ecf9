#pragma once

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace ci::quad {

template <class F>
double gauss_panels(F&& f, double a, double b, int panels) {
  if (b <= a) return 0.0;
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i)
    acc += boost::math::quadrature::gauss<double, 20>::integrate(f, a + i * h, a + (i + 1) * h);
  return acc;
}

// endpoint-singular integrands (|x|^q kinks at zeros)
template <class F>
double tanh_sinh(F&& f, double a, double b) {
  if (b <= a) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, a, b, 1e-14);
}

// zeros of fn on (a, b) located by sign changes on a dense sample and bisection
template <class F>
std::vector<double> sign_changes(F&& fn, double a, double b, int samples) {
  std::vector<double> roots;
  double x0 = a, f0 = fn(a);
  for (int i = 1; i <= samples; ++i) {
    double x1 = a + (b - a) * i / samples, f1 = fn(x1);
    if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi), fm = fn(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

template <class F>
double abs_power_integral(F&& fn, double a, double b, double q) {
  std::vector<double> cuts{a};
  for (double r : sign_changes(fn, a, b, 4000)) cuts.push_back(r);
  cuts.push_back(b);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto g = [&](double x) { return std::pow(std::abs(fn(x)), q); };
    if (q == 2.0 || q == 4.0)
      acc += gauss_panels(g, cuts[i], cuts[i + 1], 8);
    else
      acc += tanh_sinh(g, cuts[i], cuts[i + 1]);
  }
  return acc;
}

}  // namespace ci::quad
