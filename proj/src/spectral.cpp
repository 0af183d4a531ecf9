#include "convint/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace ci {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;

const Plans& plans_for(const Grid& g) {
  static std::map<std::pair<int, int>, Plans> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(g.d, g.n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<int> dims(g.d, g.n);
  double* rin = fftw_alloc_real(g.size());
  fftw_complex* cout = fftw_alloc_complex(g.spec_size());
  Plans p;
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.fwd = fftw_plan_dft_r2c(g.d, dims.data(), rin, cout, flags);
  p.bwd = fftw_plan_dft_c2r(g.d, dims.data(), cout, rin, flags);
  fftw_free(rin);
  fftw_free(cout);
  if (!p.fwd || !p.bwd) throw std::runtime_error("FFT planning failed for " + g.str());
  return cache.emplace(key, p).first->second;
}

std::vector<cplx> forward(const Grid& g, const std::vector<double>& v) {
  const Plans& p = plans_for(g);
  std::vector<double> in(v);
  std::vector<cplx> out(g.spec_size());
  fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double inv = 1.0 / static_cast<double>(g.size());
  for (auto& c : out) c *= inv;
  return out;
}

std::vector<double> backward(const Grid& g, std::vector<cplx> c) {
  const Plans& p = plans_for(g);
  std::vector<double> out(g.size());
  fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(c.data()), out.data());
  return out;
}

void require_same(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": grid mismatch " + a.str() + " vs " + b.str());
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, int n_per_axis) : d(dim), n(n_per_axis) {
  if (d < 2 || d > 3) throw std::invalid_argument("Grid: dimension must be 2 or 3");
  if (n < 4 || !is_pow2(n)) throw std::invalid_argument("Grid: n_per_axis must be a power of two >= 4");
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
  return s;
}

std::size_t Grid::spec_size() const { return size() / n * (n / 2 + 1); }

std::string Grid::str() const {
  std::ostringstream os;
  os << n;
  for (int a = 1; a < d; ++a) os << "x" << n;
  return os.str();
}

struct PeriodicField::Cache {
  std::once_flag once;
  std::vector<cplx> spec;
};

PeriodicField::PeriodicField(const Grid& g)
    : grid_(g), values_(std::make_shared<std::vector<double>>(g.size(), 0.0)), cache_(std::make_shared<Cache>()) {}

PeriodicField::PeriodicField(const Grid& g, std::vector<double> values)
    : grid_(g), cache_(std::make_shared<Cache>()) {
  if (values.size() != g.size()) throw std::invalid_argument("PeriodicField: value count does not match grid");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("PeriodicField: non-finite sample");
  values_ = std::make_shared<std::vector<double>>(std::move(values));
}

PeriodicField PeriodicField::from_function(const Grid& g, const std::function<double(const Point&)>& f) {
  std::vector<double> v(g.size());
  const double h = g.h();
  Point x{0, 0, 0};
  if (g.d == 2) {
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        x = {i * h, j * h, 0.0};
        v[static_cast<std::size_t>(i) * g.n + j] = f(x);
      }
  } else {
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int l = 0; l < g.n; ++l) {
          x = {i * h, j * h, l * h};
          v[(static_cast<std::size_t>(i) * g.n + j) * g.n + l] = f(x);
        }
  }
  return PeriodicField(g, std::move(v));
}

PeriodicField PeriodicField::constant(const Grid& g, double c) {
  return PeriodicField(g, std::vector<double>(g.size(), c));
}

PeriodicField PeriodicField::from_spectrum(const Grid& g, std::vector<cplx> coeffs) {
  if (coeffs.size() != g.spec_size()) throw std::invalid_argument("from_spectrum: coefficient count mismatch");
  return PeriodicField(g, backward(g, std::move(coeffs)));
}

const std::vector<cplx>& PeriodicField::spectrum() const {
  std::call_once(cache_->once, [this] { cache_->spec = forward(grid_, *values_); });
  return cache_->spec;
}

double PeriodicField::mean() const {
  double s = 0.0;
  for (double v : *values_) s += v;
  return s / static_cast<double>(values_->size());
}

double PeriodicField::max_abs() const {
  double m = 0.0;
  for (double v : *values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {
template <class Op>
PeriodicField zip(const PeriodicField& a, const PeriodicField& b, Op op) {
  require_same(a.grid(), b.grid(), "field arithmetic");
  const auto& x = a.values();
  const auto& y = b.values();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = op(x[i], y[i]);
  return PeriodicField(a.grid(), std::move(out));
}
}  // namespace

PeriodicField PeriodicField::operator+(const PeriodicField& o) const { return zip(*this, o, std::plus<>()); }
PeriodicField PeriodicField::operator-(const PeriodicField& o) const { return zip(*this, o, std::minus<>()); }
PeriodicField PeriodicField::operator*(const PeriodicField& o) const { return zip(*this, o, std::multiplies<>()); }
PeriodicField PeriodicField::operator-() const { return *this * -1.0; }

PeriodicField PeriodicField::operator*(double c) const {
  return map([c](double v) { return c * v; });
}

PeriodicField PeriodicField::operator+(double c) const {
  return map([c](double v) { return c + v; });
}

PeriodicField PeriodicField::map(const std::function<double(double)>& fn) const {
  std::vector<double> out(values_->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn((*values_)[i]);
  return PeriodicField(grid_, std::move(out));
}

VectorField::VectorField(std::vector<PeriodicField> comps) : c_(std::move(comps)) {
  for (std::size_t i = 1; i < c_.size(); ++i) require_same(c_[0].grid(), c_[i].grid(), "VectorField");
}

VectorField VectorField::zeros(const Grid& g, int ncomp) {
  PeriodicField z(g);
  return VectorField(std::vector<PeriodicField>(ncomp, z));
}

const Grid& VectorField::grid() const {
  if (c_.empty()) throw std::logic_error("VectorField: no components");
  return c_[0].grid();
}

VectorField VectorField::operator+(const VectorField& o) const {
  if (o.ncomp() != ncomp()) throw std::invalid_argument("VectorField: component count mismatch");
  std::vector<PeriodicField> r;
  for (int i = 0; i < ncomp(); ++i) r.push_back(c_[i] + o.c_[i]);
  return VectorField(std::move(r));
}

VectorField VectorField::operator-(const VectorField& o) const {
  if (o.ncomp() != ncomp()) throw std::invalid_argument("VectorField: component count mismatch");
  std::vector<PeriodicField> r;
  for (int i = 0; i < ncomp(); ++i) r.push_back(c_[i] - o.c_[i]);
  return VectorField(std::move(r));
}

VectorField VectorField::operator*(double c) const {
  std::vector<PeriodicField> r;
  for (const auto& f : c_) r.push_back(f * c);
  return VectorField(std::move(r));
}

VectorField VectorField::scaled(const PeriodicField& s) const {
  std::vector<PeriodicField> r;
  for (const auto& f : c_) r.push_back(f * s);
  return VectorField(std::move(r));
}

NormSpec NormSpec::Linf() { return {Kind::Lp, std::numeric_limits<double>::infinity(), 0, false}; }
NormSpec NormSpec::Ck(int k) { return {Kind::Ck, std::numeric_limits<double>::infinity(), k, false}; }

void NormSpec::validate() const {
  if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: p must lie in [1, inf]");
  if (s < 0) throw std::invalid_argument("NormSpec: order must be non-negative");
  if (kind == Kind::Lp && s != 0) throw std::invalid_argument("NormSpec: Lp carries no order");
}

void for_each_mode(const Grid& g, const std::function<void(std::size_t, const std::array<int, 3>&)>& fn) {
  const int n = g.n, half = n / 2 + 1;
  std::array<int, 3> k{0, 0, 0};
  auto wav = [n](int i) { return i <= n / 2 ? i : i - n; };
  std::size_t idx = 0;
  if (g.d == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < half; ++j) {
        k = {wav(i), j, 0};
        fn(idx++, k);
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < half; ++l) {
          k = {wav(i), wav(j), l};
          fn(idx++, k);
        }
  }
}

PeriodicField apply_multiplier(const PeriodicField& f, const std::function<cplx(const std::array<int, 3>&)>& m) {
  const auto& s = f.spectrum();
  std::vector<cplx> out(s.size());
  for_each_mode(f.grid(), [&](std::size_t i, const std::array<int, 3>& k) { out[i] = s[i] * m(k); });
  return PeriodicField::from_spectrum(f.grid(), std::move(out));
}

PeriodicField partial(const PeriodicField& f, const std::array<int, 3>& alpha) {
  const Grid& g = f.grid();
  int total = 0;
  for (int a = 0; a < g.d; ++a) {
    if (alpha[a] < 0) throw std::invalid_argument("partial: negative order");
    total += alpha[a];
  }
  for (int a = g.d; a < 3; ++a)
    if (alpha[a] != 0) throw std::out_of_range("partial: axis out of range");
  if (total == 0) return f;
  const int nyq = g.n / 2;
  return apply_multiplier(f, [&](const std::array<int, 3>& k) {
    cplx m(1.0, 0.0);
    for (int a = 0; a < g.d; ++a) {
      if (alpha[a] == 0) continue;
      if ((alpha[a] % 2 == 1) && std::abs(k[a]) == nyq) return cplx(0.0, 0.0);
      m *= std::pow(cplx(0.0, kTwoPi * k[a]), alpha[a]);
    }
    return m;
  });
}

PeriodicField derivative(const PeriodicField& f, int axis, int order) {
  if (axis < 0 || axis >= f.grid().d) throw std::out_of_range("derivative: axis out of range");
  if (order < 0) throw std::invalid_argument("derivative: negative order");
  std::array<int, 3> alpha{0, 0, 0};
  alpha[axis] = order;
  return partial(f, alpha);
}

VectorField gradient(const PeriodicField& f) {
  std::vector<PeriodicField> c;
  for (int a = 0; a < f.grid().d; ++a) c.push_back(derivative(f, a));
  return VectorField(std::move(c));
}

PeriodicField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  if (v.ncomp() != g.d) throw std::invalid_argument("divergence: need d components");
  const int nyq = g.n / 2;
  std::vector<cplx> acc(g.spec_size(), cplx(0, 0));
  for (int a = 0; a < g.d; ++a) {
    const auto& s = v[a].spectrum();
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k) {
      if (std::abs(k[a]) == nyq) return;
      acc[i] += cplx(0.0, kTwoPi * k[a]) * s[i];
    });
  }
  return PeriodicField::from_spectrum(g, std::move(acc));
}

PeriodicField laplacian(const PeriodicField& f) {
  return apply_multiplier(f, [](const std::array<int, 3>& k) {
    double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    return cplx(-kTwoPi * kTwoPi * k2, 0.0);
  });
}

PeriodicField project_mean_zero(const PeriodicField& f) {
  const double m = f.mean();
  return f.map([m](double v) { return v - m; });
}

VectorField anti_divergence_projected(const PeriodicField& f) {
  const Grid& g = f.grid();
  const int nyq = g.n / 2;
  const auto& s = f.spectrum();
  std::vector<PeriodicField> comps;
  for (int a = 0; a < g.d; ++a) {
    std::vector<cplx> out(s.size());
    for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k) {
      double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
      if (k2 == 0.0 || std::abs(k[a]) == nyq) {
        out[i] = 0.0;
        return;
      }
      out[i] = s[i] * cplx(0.0, -k[a] / (kTwoPi * k2));
    });
    comps.push_back(PeriodicField::from_spectrum(g, std::move(out)));
  }
  return VectorField(std::move(comps));
}

namespace {
void require_mean_zero(const PeriodicField& f, const char* what) {
  const double m = f.mean();
  const double scale = std::max(1.0, std::sqrt(inner(f, f)));
  if (std::abs(m) > 1e-10 * scale)
    throw std::invalid_argument(std::string(what) + ": input must have zero spatial mean (mean = " +
                                std::to_string(m) + ")");
}
}  // namespace

VectorField anti_divergence(const PeriodicField& f) {
  require_mean_zero(f, "anti_divergence");
  return anti_divergence_projected(f);
}

VectorField bilinear_antidiv(const PeriodicField& a, const PeriodicField& f) {
  require_same(a.grid(), f.grid(), "bilinear_antidiv");
  require_mean_zero(f, "bilinear_antidiv");
  VectorField Rf = anti_divergence_projected(f);
  const Grid& g = a.grid();
  PeriodicField dot(g);
  for (int j = 0; j < g.d; ++j) dot = dot + derivative(a, j) * Rf[j];
  VectorField corr = anti_divergence_projected(dot);
  return Rf.scaled(a) - corr;
}

VectorField bilinear_antidiv_vec(const VectorField& a_grad, const VectorField& F) {
  require_same(a_grad.grid(), F.grid(), "bilinear_antidiv_vec");
  if (a_grad.ncomp() != F.ncomp()) throw std::invalid_argument("bilinear_antidiv_vec: component count mismatch");
  VectorField acc = VectorField::zeros(F.grid(), F.grid().d);
  for (int j = 0; j < F.ncomp(); ++j) acc = acc + bilinear_antidiv(a_grad[j], F[j]);
  return acc;
}

PeriodicField resample(const PeriodicField& f, const Grid& target) {
  const Grid& g = f.grid();
  if (g.d != target.d) throw std::invalid_argument("resample: dimension mismatch");
  if (g == target) return f;
  const auto& s = f.spectrum();
  std::vector<cplx> out(target.spec_size(), cplx(0, 0));
  const int lim = std::min(g.n, target.n) / 2;
  const int nt = target.n, ht = nt / 2 + 1;
  for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k) {
    for (int a = 0; a < g.d; ++a)
      if (std::abs(k[a]) >= lim) return;
    std::size_t idx = 0;
    for (int a = 0; a < g.d - 1; ++a) idx = idx * nt + (k[a] >= 0 ? k[a] : k[a] + nt);
    idx = idx * ht + k[g.d - 1];
    out[idx] = s[i];
  });
  return PeriodicField::from_spectrum(target, std::move(out));
}

VectorField resample(const VectorField& f, const Grid& target) {
  std::vector<PeriodicField> c;
  for (const auto& x : f.components()) c.push_back(resample(x, target));
  return VectorField(std::move(c));
}

PeriodicField rescale(const PeriodicField& f, int sigma, const Grid& target) {
  const Grid& g = f.grid();
  if (sigma < 1) throw std::invalid_argument("rescale: sigma must be a positive integer");
  if (g.d != target.d) throw std::invalid_argument("rescale: dimension mismatch");
  const auto& s = f.spectrum();
  double total = 0.0, lost = 0.0;
  std::vector<cplx> out(target.spec_size(), cplx(0, 0));
  const int nt = target.n, ht = nt / 2 + 1;
  for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k) {
    const double w = std::norm(s[i]);
    total += w;
    bool keep = true;
    for (int a = 0; a < g.d; ++a)
      if (std::abs(k[a]) == g.n / 2 || std::abs(sigma * k[a]) >= nt / 2) keep = false;
    if (!keep) {
      lost += w;
      return;
    }
    std::size_t idx = 0;
    for (int a = 0; a < g.d - 1; ++a) {
      int q = sigma * k[a];
      idx = idx * nt + (q >= 0 ? q : q + nt);
    }
    idx = idx * ht + sigma * k[g.d - 1];
    out[idx] = s[i];
  });
  if (total > 0 && lost > 1e-24 * total)
    throw UnresolvedField("rescale: target grid " + target.str() + " cannot hold sigma = " + std::to_string(sigma));
  return PeriodicField::from_spectrum(target, std::move(out));
}

double tail_fraction(const PeriodicField& f) {
  const Grid& g = f.grid();
  const auto& s = f.spectrum();
  const int q = g.n / 4, last_nyq = g.n / 2;
  double total = 0.0, tail = 0.0;
  for_each_mode(g, [&](std::size_t i, const std::array<int, 3>& k) {
    const int kl = k[g.d - 1];
    const double w = std::norm(s[i]) * ((kl == 0 || kl == last_nyq) ? 1.0 : 2.0);
    total += w;
    for (int a = 0; a < g.d; ++a)
      if (std::abs(k[a]) > q) {
        tail += w;
        return;
      }
  });
  return total > 0 ? std::sqrt(tail / total) : 0.0;
}

bool is_resolved(const PeriodicField& f, double tol) { return tail_fraction(f) <= tol; }

std::vector<std::array<int, 3>> multi_indices(int d, int s) {
  std::vector<std::array<int, 3>> out;
  if (d == 2) {
    for (int i = s; i >= 0; --i) out.push_back({i, s - i, 0});
  } else {
    for (int i = s; i >= 0; --i)
      for (int j = s - i; j >= 0; --j) out.push_back({i, j, s - i - j});
  }
  return out;
}

double lp_norm(const PeriodicField& f, double p) {
  const auto& v = f.values();
  if (std::isinf(p)) return f.max_abs();
  double acc = 0.0;
  if (p == 2.0) {
    for (double x : v) acc += x * x;
    return std::sqrt(acc / v.size());
  }
  if (p == 1.0) {
    for (double x : v) acc += std::abs(x);
    return acc / v.size();
  }
  for (double x : v) acc += std::pow(std::abs(x), p);
  return std::pow(acc / v.size(), 1.0 / p);
}

double l2_norm(const PeriodicField& f) { return lp_norm(f, 2.0); }

double l2_norm(const VectorField& v) {
  double acc = 0.0;
  for (const auto& c : v.components()) acc += inner(c, c);
  return std::sqrt(acc);
}

double inner(const PeriodicField& a, const PeriodicField& b) {
  require_same(a.grid(), b.grid(), "inner");
  const auto& x = a.values();
  const auto& y = b.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc / x.size();
}

namespace {
void require_resolved(const PeriodicField& f, double tol) {
  const double t = tail_fraction(f);
  if (t > tol)
    throw UnresolvedField("norm: field on grid " + f.grid().str() + " is not resolved (tail fraction " +
                          std::to_string(t) + ")");
}
}  // namespace

double norm(const PeriodicField& f, const NormSpec& spec, double resolution_tol) {
  spec.validate();
  const Grid& g = f.grid();
  switch (spec.kind) {
    case NormSpec::Kind::Lp:
      return lp_norm(f, spec.p);
    case NormSpec::Kind::Ck: {
      if (spec.s > 0) require_resolved(f, resolution_tol);
      double m = 0.0;
      for (int j = 0; j <= spec.s; ++j)
        for (const auto& a : multi_indices(g.d, j)) m = std::max(m, partial(f, a).max_abs());
      return m;
    }
    case NormSpec::Kind::Wsp: {
      if (spec.s > 0) require_resolved(f, resolution_tol);
      double acc = 0.0;
      for (int j = spec.homogeneous ? spec.s : 0; j <= spec.s; ++j)
        for (const auto& a : multi_indices(g.d, j)) acc += lp_norm(partial(f, a), spec.p);
      return acc;
    }
  }
  return 0.0;
}

double norm(const VectorField& v, const NormSpec& spec, double resolution_tol) {
  spec.validate();
  if (spec.kind == NormSpec::Kind::Lp) {
    PeriodicField mag2(v.grid());
    for (const auto& c : v.components()) mag2 = mag2 + c * c;
    return lp_norm(mag2.map([](double x) { return std::sqrt(x); }), spec.p);
  }
  double out = 0.0;
  for (const auto& c : v.components()) {
    double x = norm(c, spec, resolution_tol);
    out = spec.kind == NormSpec::Kind::Ck ? std::max(out, x) : out + x;
  }
  return out;
}

double improved_holder_gap(const PeriodicField& a, const PeriodicField& f, int sigma, double r) {
  PeriodicField fs = rescale(f, sigma, a.grid());
  PeriodicField f1 = rescale(f, 1, a.grid());
  return std::abs(lp_norm(a * fs, r) - lp_norm(a, r) * lp_norm(f1, r));
}

}  // namespace ci
