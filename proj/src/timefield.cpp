#include "convint/timefield.hpp"

#include <deque>
#include <mutex>
#include <stdexcept>
#include <string>

namespace ci {

namespace {

void require_order(int order, int max_order, const char* what) {
  if (order < 0 || order > max_order)
    throw std::out_of_range(std::string(what) + ": time derivative of order " + std::to_string(order) +
                            " not available (max " + std::to_string(max_order) + ")");
}

template <class V>
struct Memo {
  std::mutex m;
  std::deque<std::pair<std::pair<double, int>, V>> slots;
  std::size_t cap = 6;
};

}  // namespace

PeriodicField ScalarTimeField::operator()(double t, int order) const {
  require_order(order, max_order, "ScalarTimeField");
  if (!active(t) || !fn) return PeriodicField(grid);
  return fn(t, order);
}

ScalarTimeField ScalarTimeField::zero(const Grid& g, int max_order) {
  ScalarTimeField f;
  f.grid = g;
  f.t_lo = 1.0;
  f.t_hi = 0.0;
  f.max_order = max_order;
  return f;
}

VectorField VectorTimeField::operator()(double t, int order) const {
  require_order(order, max_order, "VectorTimeField");
  if (!active(t) || !fn) return VectorField::zeros(grid, ncomp);
  return fn(t, order);
}

VectorTimeField VectorTimeField::zero(const Grid& g, int ncomp, int max_order) {
  VectorTimeField f;
  f.grid = g;
  f.ncomp = ncomp;
  f.t_lo = 1.0;
  f.t_hi = 0.0;
  f.max_order = max_order;
  return f;
}

double binomial(int m, int i) {
  double c = 1.0;
  for (int j = 1; j <= i; ++j) c = c * (m - i + j) / j;
  return c;
}

template <class TF, class V>
static TF memoize_impl(TF f, std::size_t slots) {
  if (!f.fn) return f;
  auto memo = std::make_shared<Memo<V>>();
  memo->cap = slots;
  auto inner = f.fn;
  f.fn = [memo, inner](double t, int order) {
    {
      std::lock_guard<std::mutex> lock(memo->m);
      for (const auto& s : memo->slots)
        if (s.first.first == t && s.first.second == order) return s.second;
    }
    V v = inner(t, order);
    std::lock_guard<std::mutex> lock(memo->m);
    memo->slots.emplace_front(std::make_pair(t, order), v);
    if (memo->slots.size() > memo->cap) memo->slots.pop_back();
    return v;
  };
  return f;
}

ScalarTimeField memoize(ScalarTimeField f, std::size_t slots) {
  return memoize_impl<ScalarTimeField, PeriodicField>(std::move(f), slots);
}
VectorTimeField memoize(VectorTimeField f, std::size_t slots) {
  return memoize_impl<VectorTimeField, VectorField>(std::move(f), slots);
}

ScalarTimeField on_grid(const ScalarTimeField& f, const Grid& g) {
  if (f.grid == g) return f;
  ScalarTimeField out = f;
  out.grid = g;
  if (f.fn) {
    auto inner = f.fn;
    out.fn = [inner, g](double t, int m) { return resample(inner(t, m), g); };
  }
  return out;
}

VectorTimeField on_grid(const VectorTimeField& f, const Grid& g) {
  if (f.grid == g) return f;
  VectorTimeField out = f;
  out.grid = g;
  if (f.fn) {
    auto inner = f.fn;
    out.fn = [inner, g](double t, int m) { return resample(inner(t, m), g); };
  }
  return out;
}

namespace {

std::pair<double, double> hull(double a_lo, double a_hi, double b_lo, double b_hi) {
  const bool ae = a_lo > a_hi, be = b_lo > b_hi;
  if (ae) return {b_lo, b_hi};
  if (be) return {a_lo, a_hi};
  return {std::min(a_lo, b_lo), std::max(a_hi, b_hi)};
}

}  // namespace

ScalarTimeField operator+(const ScalarTimeField& a, const ScalarTimeField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("ScalarTimeField +: grid mismatch");
  ScalarTimeField out;
  out.grid = a.grid;
  std::tie(out.t_lo, out.t_hi) = hull(a.t_lo, a.t_hi, b.t_lo, b.t_hi);
  out.max_order = std::min(a.max_order, b.max_order);
  out.fn = [a, b](double t, int m) { return a(t, m) + b(t, m); };
  return out;
}

VectorTimeField operator+(const VectorTimeField& a, const VectorTimeField& b) {
  if (a.grid != b.grid || a.ncomp != b.ncomp) throw std::invalid_argument("VectorTimeField +: shape mismatch");
  VectorTimeField out;
  out.grid = a.grid;
  out.ncomp = a.ncomp;
  std::tie(out.t_lo, out.t_hi) = hull(a.t_lo, a.t_hi, b.t_lo, b.t_hi);
  out.max_order = std::min(a.max_order, b.max_order);
  out.fn = [a, b](double t, int m) { return a(t, m) + b(t, m); };
  return out;
}

VectorTimeField product(const ScalarTimeField& a, const VectorTimeField& v) {
  if (a.grid != v.grid) throw std::invalid_argument("product: grid mismatch");
  VectorTimeField out;
  out.grid = v.grid;
  out.ncomp = v.ncomp;
  out.t_lo = std::max(a.t_lo, v.t_lo);
  out.t_hi = std::min(a.t_hi, v.t_hi);
  out.max_order = std::min(a.max_order, v.max_order);
  out.fn = [a, v](double t, int m) {
    VectorField acc = VectorField::zeros(v.grid, v.ncomp);
    for (int i = 0; i <= m; ++i) acc = acc + v(t, m - i).scaled(a(t, i)) * binomial(m, i);
    return acc;
  };
  return out;
}

ScalarTimeField separated_scalar(const Grid& g, std::vector<std::pair<TimeFn, PeriodicField>> terms, double t_lo,
                                 double t_hi, int max_order) {
  for (const auto& tm : terms)
    if (tm.second.grid() != g) throw std::invalid_argument("separated_scalar: grid mismatch");
  ScalarTimeField out;
  out.grid = g;
  out.t_lo = t_lo;
  out.t_hi = t_hi;
  out.max_order = max_order;
  auto shared = std::make_shared<const std::vector<std::pair<TimeFn, PeriodicField>>>(std::move(terms));
  out.fn = [shared, g](double t, int m) {
    PeriodicField acc(g);
    for (const auto& [a, F] : *shared) {
      const double c = a(t, m);
      if (c != 0.0) acc = acc + F * c;
    }
    return acc;
  };
  return out;
}

VectorTimeField separated_vector(const Grid& g, std::vector<std::pair<TimeFn, VectorField>> terms, double t_lo,
                                 double t_hi, int max_order) {
  int ncomp = terms.empty() ? g.d : terms.front().second.ncomp();
  for (const auto& tm : terms)
    if (tm.second.grid() != g || tm.second.ncomp() != ncomp)
      throw std::invalid_argument("separated_vector: shape mismatch");
  VectorTimeField out;
  out.grid = g;
  out.ncomp = ncomp;
  out.t_lo = t_lo;
  out.t_hi = t_hi;
  out.max_order = max_order;
  auto shared = std::make_shared<const std::vector<std::pair<TimeFn, VectorField>>>(std::move(terms));
  out.fn = [shared, g, ncomp](double t, int m) {
    VectorField acc = VectorField::zeros(g, ncomp);
    for (const auto& [a, F] : *shared) {
      const double c = a(t, m);
      if (c != 0.0) acc = acc + F * c;
    }
    return acc;
  };
  return out;
}

}  // namespace ci
