#include "convint/perturbation.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ci {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ChebState {
  double t_lo, t_hi;
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;  // barycentric weights
  std::vector<std::vector<double>> D;
  std::mutex m;
  std::map<int, std::vector<PeriodicField>> by_order;
};

PeriodicField combine(const std::vector<PeriodicField>& v, const std::vector<double>& c) {
  PeriodicField acc(v.front().grid());
  for (std::size_t j = 0; j < v.size(); ++j)
    if (c[j] != 0.0) acc = acc + v[j] * c[j];
  return acc;
}

const std::vector<PeriodicField>& node_derivs(ChebState& s, int order) {
  std::lock_guard<std::mutex> lock(s.m);
  auto it = s.by_order.find(order);
  if (it != s.by_order.end()) return it->second;
  const std::vector<PeriodicField>& prev = s.by_order.at(order - 1);
  const double scale = 2.0 / (s.t_hi - s.t_lo);
  std::vector<PeriodicField> next;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    std::vector<double> row(s.D[i]);
    for (double& r : row) r *= scale;
    next.push_back(combine(prev, row));
  }
  return s.by_order.emplace(order, std::move(next)).first->second;
}

}  // namespace

std::vector<double> chebyshev_nodes(double t_lo, double t_hi, int degree) {
  if (degree < 1 || !(t_hi > t_lo)) throw std::invalid_argument("chebyshev_nodes: need degree >= 1 and t_lo < t_hi");
  std::vector<double> t(degree + 1);
  const double mid = 0.5 * (t_lo + t_hi), half = 0.5 * (t_hi - t_lo);
  for (int j = 0; j <= degree; ++j) t[j] = mid + half * std::cos(kPi * j / degree);
  return t;
}

ScalarTimeField chebyshev_interpolant(double t_lo, double t_hi, std::vector<PeriodicField> values, int max_order) {
  if (values.size() < 2) throw std::invalid_argument("chebyshev_interpolant: need at least two snapshots");
  const int N = static_cast<int>(values.size()) - 1;
  const Grid g = values.front().grid();
  auto s = std::make_shared<ChebState>();
  s->t_lo = t_lo;
  s->t_hi = t_hi;
  s->x.resize(N + 1);
  s->w.resize(N + 1);
  for (int j = 0; j <= N; ++j) {
    s->x[j] = std::cos(kPi * j / N);
    s->w[j] = (j % 2 ? -1.0 : 1.0) * ((j == 0 || j == N) ? 0.5 : 1.0);
  }
  s->D.assign(N + 1, std::vector<double>(N + 1, 0.0));
  for (int i = 0; i <= N; ++i) {
    double diag = 0.0;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      const double ci = (i == 0 || i == N) ? 2.0 : 1.0, cj = (j == 0 || j == N) ? 2.0 : 1.0;
      const double sgn = ((i + j) % 2) ? -1.0 : 1.0;
      s->D[i][j] = ci / cj * sgn / (s->x[i] - s->x[j]);
      diag -= s->D[i][j];
    }
    s->D[i][i] = diag;
  }
  for (const auto& v : values)
    if (v.grid() != g) throw std::invalid_argument("chebyshev_interpolant: grid mismatch");
  s->by_order.emplace(0, std::move(values));

  ScalarTimeField out;
  out.grid = g;
  out.t_lo = t_lo;
  out.t_hi = t_hi;
  out.max_order = max_order;
  out.fn = [s, N](double t, int order) {
    const auto& f = node_derivs(*s, order);
    const double x = (2.0 * t - s->t_lo - s->t_hi) / (s->t_hi - s->t_lo);
    std::vector<double> c(N + 1, 0.0);
    for (int j = 0; j <= N; ++j)
      if (x == s->x[j]) {
        c[j] = 1.0;
        return combine(f, c);
      }
    double den = 0.0;
    for (int j = 0; j <= N; ++j) {
      c[j] = s->w[j] / (x - s->x[j]);
      den += c[j];
    }
    for (double& v : c) v /= den;
    return combine(f, c);
  };
  return out;
}

ScalarTimeField chebyshev_sample(const std::function<PeriodicField(double)>& fn, const Grid& g, double t_lo,
                                 double t_hi, int degree, int max_order) {
  std::vector<PeriodicField> v;
  for (double t : chebyshev_nodes(t_lo, t_hi, degree)) {
    v.push_back(fn(t));
    if (v.back().grid() != g) throw std::invalid_argument("chebyshev_sample: grid mismatch");
  }
  return chebyshev_interpolant(t_lo, t_hi, std::move(v), max_order);
}

std::vector<CoefficientField> decompose_defect(const VectorTimeField& R) {
  const bool empty = R.t_lo > R.t_hi || !R.fn;
  if (!empty && (R.t_lo <= 0.0 || R.t_hi >= 1.0))
    throw std::invalid_argument("decompose_defect: temporal support must lie strictly inside (0, 1)");
  VectorTimeField Rm = memoize(R, 4);
  std::vector<CoefficientField> out;
  for (int k = 0; k < R.ncomp; ++k) {
    CoefficientField c;
    c.k = k;
    c.field.grid = R.grid;
    c.field.t_lo = R.t_lo;
    c.field.t_hi = R.t_hi;
    c.field.max_order = R.max_order;
    if (!empty) c.field.fn = [Rm, k](double t, int m) { return Rm(t, m)[k]; };
    out.push_back(std::move(c));
  }
  return out;
}

ProfileSet make_profiles(const ParameterSet& ps) {
  ProfileSet out;
  out.ts = TimeScales::from_log(ps.d(), ps.log_kappa, static_cast<double>(ps.sigma), ps.alpha());
  out.ts.log_kappa = ps.log_kappa;
  for (int k = 0; k < ps.d(); ++k) {
    out.g_tilde.emplace_back(ProfileKind::g_tilde, k, out.ts);
    out.g.emplace_back(ProfileKind::g_small, k, out.ts);
    out.product.emplace_back(ProfileKind::product, k, out.ts);
    out.h.emplace_back(ProfileKind::h_corrector, k, out.ts);
  }
  return out;
}

SeparatedField::SeparatedField(const Grid& g, int ncomp, bool project_mean)
    : grid_(g), ncomp_(ncomp), project_(project_mean) {}

void SeparatedField::add(SeparatedTerm term) {
  if (term.block) {
    if (term.block->grid() != grid_ || term.block->ncomp() != ncomp_)
      throw std::invalid_argument("SeparatedField: block shape mismatch");
  } else if (ncomp_ != 1) {
    throw std::invalid_argument("SeparatedField: unit block only for scalar fields");
  }
  if (term.coeff && term.coeff->grid.d != grid_.d) throw std::invalid_argument("SeparatedField: coefficient dimension");
  terms_.push_back(std::move(term));
}

int SeparatedField::max_order() const {
  int m = 2;
  for (const auto& t : terms_)
    if (t.coeff) m = std::min(m, t.coeff->max_order);
  return m;
}

std::pair<double, double> SeparatedField::support() const {
  double lo = 1.0, hi = 0.0;
  for (const auto& t : terms_) {
    double a = 0.0, b = 1.0;
    if (t.coeff) {
      a = t.coeff->t_lo;
      b = t.coeff->t_hi;
    }
    if (a > b) continue;
    if (lo > hi) {
      lo = a;
      hi = b;
    } else {
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
  }
  return {lo, hi};
}

VectorField SeparatedField::eval(double t, int order) const {
  VectorField acc = VectorField::zeros(grid_, ncomp_);
  for (const auto& term : terms_) {
    if (term.coeff && !term.coeff->active(t)) continue;
    for (int i = 0; i <= order; ++i) {
      if (!term.profile && i > 0) break;
      const double p = term.profile ? term.profile->eval(t, i) : 1.0;
      if (p == 0.0) continue;
      const int mc = order - i;
      if (!term.coeff && mc > 0) continue;
      const double c = binomial(order, i) * p * term.scale;
      if (term.coeff) {
        PeriodicField a = resample((*term.coeff)(t, mc), grid_);
        acc = acc + (term.block ? term.block->scaled(a) : VectorField({a})) * c;
      } else {
        acc = acc + (term.block ? *term.block : VectorField({PeriodicField::constant(grid_, 1.0)})) * c;
      }
    }
  }
  if (project_) {
    std::vector<PeriodicField> comps;
    for (const auto& f : acc.components()) comps.push_back(project_mean_zero(f));
    acc = VectorField(std::move(comps));
  }
  return acc;
}

PeriodicField SeparatedField::eval_scalar(double t, int order) const {
  if (ncomp_ != 1) throw std::logic_error("SeparatedField::eval_scalar on a vector field");
  return eval(t, order)[0];
}

VectorTimeField SeparatedField::as_vector() const {
  VectorTimeField f;
  f.grid = grid_;
  f.ncomp = ncomp_;
  std::tie(f.t_lo, f.t_hi) = support();
  f.max_order = max_order();
  auto self = std::make_shared<const SeparatedField>(*this);
  f.fn = [self](double t, int m) { return self->eval(t, m); };
  return f;
}

ScalarTimeField SeparatedField::as_scalar() const {
  if (ncomp_ != 1) throw std::logic_error("SeparatedField::as_scalar on a vector field");
  ScalarTimeField f;
  f.grid = grid_;
  std::tie(f.t_lo, f.t_hi) = support();
  f.max_order = max_order();
  auto self = std::make_shared<const SeparatedField>(*this);
  f.fn = [self](double t, int m) { return self->eval(t, m)[0]; };
  return f;
}

namespace {

void require_match(const MikadoSet& blocks, const ProfileSet& prof, const ParameterSet& ps, const char* what) {
  const std::string w(what);
  if (blocks.sigma() != ps.sigma || prof.ts.sigma != static_cast<double>(ps.sigma))
    throw std::invalid_argument(w + ": sigma mismatch between blocks, profiles and parameters");
  if (std::abs(blocks.mu() - ps.mu) > 1e-12 * ps.mu) throw std::invalid_argument(w + ": mu mismatch");
  if (std::abs(prof.ts.log_kappa - ps.log_kappa) > 1e-12 * (1.0 + std::abs(ps.log_kappa)))
    throw std::invalid_argument(w + ": kappa mismatch");
  if (blocks.grid().d != ps.d() || blocks.size() != ps.d()) throw std::invalid_argument(w + ": dimension mismatch");
}

}  // namespace

SeparatedField build_w(const MikadoSet& blocks, const ProfileSet& prof, const ParameterSet& ps) {
  require_match(blocks, prof, ps, "build_w");
  const Grid& g = blocks.grid();
  SeparatedField w(g, g.d);
  for (int k = 0; k < g.d; ++k) {
    SeparatedTerm t;
    t.profile = prof.g[k];
    t.block = blocks.block(k).W;
    w.add(std::move(t));
  }
  return w;
}

ThetaParts build_theta(const std::vector<CoefficientField>& Rk, const MikadoSet& blocks, const ProfileSet& prof,
                       const ParameterSet& ps) {
  require_match(blocks, prof, ps, "build_theta");
  const Grid& g = blocks.grid();
  if (static_cast<int>(Rk.size()) != g.d) throw std::invalid_argument("build_theta: need one coefficient per direction");
  ThetaParts out{SeparatedField(g, 1, false), SeparatedField(g, 1, false), ScalarTimeField{}};
  for (const auto& c : Rk) {
    if (!c.field.fn || c.field.t_lo > c.field.t_hi) continue;
    SeparatedTerm tp;
    tp.profile = prof.g_tilde[c.k];
    tp.coeff = c.field;
    tp.block = VectorField({blocks.block(c.k).Phi});
    tp.scale = -1.0;
    out.theta_p.add(std::move(tp));

    // sigma^{-1} div(h_k R_k e_k) = sigma^{-1} h_k d_k R_k
    ScalarTimeField dk = c.field;
    auto inner = c.field.fn;
    const int axis = c.k;
    dk.fn = [inner, axis](double t, int m) { return derivative(inner(t, m), axis); };
    SeparatedTerm to;
    to.profile = prof.h[c.k];
    to.coeff = dk;
    to.scale = 1.0 / static_cast<double>(ps.sigma);
    out.theta_o.add(std::move(to));
  }
  auto tp = std::make_shared<const SeparatedField>(out.theta_p);
  auto to = std::make_shared<const SeparatedField>(out.theta_o);
  out.theta.grid = g;
  std::tie(out.theta.t_lo, out.theta.t_hi) = out.theta_p.support();
  out.theta.max_order = std::min(out.theta_p.max_order(), out.theta_o.max_order());
  if (out.theta_p.term_count() > 0)
    out.theta.fn = [tp, to](double t, int m) { return project_mean_zero(tp->eval_scalar(t, m)) + to->eval_scalar(t, m); };
  return out;
}

Perturbation build_perturbation(const VectorTimeField& R, std::shared_ptr<const MikadoSet> blocks,
                                const ParameterSet& ps) {
  Perturbation P;
  P.ps = ps;
  P.blocks = blocks;
  P.prof = make_profiles(ps);
  const Grid& g = blocks->grid();
  P.Rk = decompose_defect(on_grid(R, g));
  for (auto& c : P.Rk) c.field = memoize(c.field, 4);
  P.theta = build_theta(P.Rk, *blocks, P.prof, ps);
  P.w = build_w(*blocks, P.prof, ps);
  return P;
}

}  // namespace ci
