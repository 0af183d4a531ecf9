#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "convint/spectral.hpp"

namespace ci {

// t -> d^m/dt^m f(t) for a scalar function of time
using TimeFn = std::function<double(double t, int order)>;

// Space-time field known through its time slices and their time derivatives up to max_order.
// Outside [t_lo, t_hi] the field vanishes and fn is not called.
struct ScalarTimeField {
  Grid grid;
  double t_lo = 0.0, t_hi = 1.0;
  int max_order = 0;
  std::function<PeriodicField(double, int)> fn;

  PeriodicField operator()(double t, int order = 0) const;
  bool active(double t) const { return t >= t_lo && t <= t_hi; }
  static ScalarTimeField zero(const Grid& g, int max_order = 8);
};

struct VectorTimeField {
  Grid grid;
  int ncomp = 0;
  double t_lo = 0.0, t_hi = 1.0;
  int max_order = 0;
  std::function<VectorField(double, int)> fn;

  VectorField operator()(double t, int order = 0) const;
  bool active(double t) const { return t >= t_lo && t <= t_hi; }
  static VectorTimeField zero(const Grid& g, int ncomp, int max_order = 8);
};

double binomial(int m, int i);

// keeps the last few (t, order) slices; evaluation of composite fields revisits the same slice often
ScalarTimeField memoize(ScalarTimeField f, std::size_t slots = 6);
VectorTimeField memoize(VectorTimeField f, std::size_t slots = 6);

ScalarTimeField on_grid(const ScalarTimeField& f, const Grid& g);
VectorTimeField on_grid(const VectorTimeField& f, const Grid& g);

ScalarTimeField operator+(const ScalarTimeField& a, const ScalarTimeField& b);
VectorTimeField operator+(const VectorTimeField& a, const VectorTimeField& b);
// Leibniz rule for the product a(t) v(t)
VectorTimeField product(const ScalarTimeField& a, const VectorTimeField& v);

// Sum_j a_j(t) F_j(x) with closed-form time factors supported in [t_lo, t_hi]
ScalarTimeField separated_scalar(const Grid& g, std::vector<std::pair<TimeFn, PeriodicField>> terms, double t_lo,
                                 double t_hi, int max_order);
VectorTimeField separated_vector(const Grid& g, std::vector<std::pair<TimeFn, VectorField>> terms, double t_lo,
                                 double t_hi, int max_order);

}  // namespace ci
