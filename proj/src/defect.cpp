#include "convint/defect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ci {

DefectTriple lift(const DefectTriple& tr, const Grid& g) {
  return {on_grid(tr.rho, g), on_grid(tr.u, g), on_grid(tr.R, g)};
}

int DiffOperator::order() const {
  int m = 0;
  for (const auto& [a, c] : terms)
    if (c != 0.0) m = std::max(m, a[0] + a[1] + a[2]);
  return m;
}

PeriodicField DiffOperator::apply(const PeriodicField& f) const {
  PeriodicField acc(f.grid());
  for (const auto& [a, c] : terms)
    if (c != 0.0) acc = acc + partial(f, a) * c;
  return acc;
}

DiffOperator DiffOperator::laplacian(int d) {
  DiffOperator L;
  for (int a = 0; a < d; ++a) {
    std::array<int, 3> al{0, 0, 0};
    al[a] = 2;
    L.terms.push_back({al, 1.0});
  }
  return L;
}

DiffOperator DiffOperator::bilaplacian(int d) {
  DiffOperator L;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::array<int, 3> al{0, 0, 0};
      al[a] += 2;
      al[b] += 2;
      L.terms.push_back({al, 1.0});
    }
  return L;
}

namespace {

struct BlockCache {
  std::vector<PeriodicField> phi;            // P_{!=0} Phi_k
  std::vector<std::vector<PeriodicField>> F;  // P_{!=0}(Phi_k W_k), per component
  std::vector<std::vector<bool>> F_zero;
};

std::shared_ptr<const BlockCache> block_cache(const MikadoSet& blocks) {
  auto c = std::make_shared<BlockCache>();
  for (int k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks.block(k);
    c->phi.push_back(project_mean_zero(b.Phi));
    std::vector<PeriodicField> f;
    std::vector<bool> z;
    for (const auto& comp : b.PhiW.components()) {
      z.push_back(comp.max_abs() == 0.0);
      f.push_back(project_mean_zero(comp));
    }
    c->F.push_back(std::move(f));
    c->F_zero.push_back(std::move(z));
  }
  return c;
}

std::pair<double, double> coeff_support(const Perturbation& P) {
  double lo = 1.0, hi = 0.0;
  for (const auto& c : P.Rk) {
    if (!c.field.fn || c.field.t_lo > c.field.t_hi) continue;
    lo = std::min(lo, c.field.t_lo);
    hi = std::max(hi, c.field.t_hi);
  }
  return {lo, hi};
}

int coeff_order(const Perturbation& P) {
  int m = 8;
  for (const auto& c : P.Rk) m = std::min(m, c.field.max_order);
  return m;
}

VectorTimeField shell(const Perturbation& P, int max_order) {
  VectorTimeField f;
  f.grid = P.blocks->grid();
  f.ncomp = f.grid.d;
  std::tie(f.t_lo, f.t_hi) = coeff_support(P);
  f.max_order = std::max(0, max_order);
  return f;
}

}  // namespace

VectorTimeField osc_x(const Perturbation& P) {
  VectorTimeField out = shell(P, std::min(coeff_order(P), 2));
  if (out.t_lo > out.t_hi) return out;
  auto cache = block_cache(*P.blocks);
  auto Rk = P.Rk;
  auto prod = P.prof.product;
  const Grid g = out.grid;
  out.fn = [cache, Rk, prod, g](double t, int m) {
    VectorField acc = VectorField::zeros(g, g.d);
    for (const auto& c : Rk) {
      for (int i = 0; i <= m; ++i) {
        const double p = prod[c.k].eval(t, i);
        if (p == 0.0) continue;
        const VectorField grad = gradient(c.field(t, m - i));
        for (int j = 0; j < g.d; ++j) {
          if (cache->F_zero[c.k][j]) continue;
          acc = acc + bilinear_antidiv(grad[j], cache->F[c.k][j]) * (-binomial(m, i) * p);
        }
      }
    }
    return acc;
  };
  return out;
}

VectorTimeField osc_t(const Perturbation& P) {
  VectorTimeField out = shell(P, std::min(coeff_order(P) - 1, 2));
  if (out.t_lo > out.t_hi) return out;
  auto Rk = P.Rk;
  auto h = P.prof.h;
  const double inv_sigma = 1.0 / static_cast<double>(P.ps.sigma);
  const Grid g = out.grid;
  out.fn = [Rk, h, inv_sigma, g](double t, int m) {
    std::vector<PeriodicField> comps(g.d, PeriodicField(g));
    for (const auto& c : Rk)
      for (int i = 0; i <= m; ++i) {
        const double hv = h[c.k].eval(t, i);
        if (hv == 0.0) continue;
        comps[c.k] = comps[c.k] + c.field(t, m - i + 1) * (binomial(m, i) * hv * inv_sigma);
      }
    return VectorField(std::move(comps));
  };
  return out;
}

VectorTimeField acc(const Perturbation& P) {
  VectorTimeField out = shell(P, std::min(coeff_order(P) - 1, 1));
  if (out.t_lo > out.t_hi) return out;
  auto cache = block_cache(*P.blocks);
  auto Rk = P.Rk;
  auto gt = P.prof.g_tilde;
  const Grid g = out.grid;
  out.fn = [cache, Rk, gt, g](double t, int m) {
    VectorField sum = VectorField::zeros(g, g.d);
    for (const auto& c : Rk) {
      // d_t^m of d_t(g~ R_k) = sum_i C(m+1, i) g~^(i) R_k^(m+1-i)
      PeriodicField a(g);
      bool any = false;
      for (int i = 0; i <= m + 1; ++i) {
        const double gv = gt[c.k].eval(t, i);
        if (gv == 0.0) continue;
        a = a + c.field(t, m + 1 - i) * (binomial(m + 1, i) * gv);
        any = true;
      }
      if (any) sum = sum - bilinear_antidiv(a, cache->phi[c.k]);
    }
    return sum;
  };
  return out;
}

VectorTimeField lin(const ScalarTimeField& theta, const VectorTimeField& u, const ScalarTimeField& rho,
                    const VectorTimeField& w) {
  return product(theta, u) + product(rho, w);
}

VectorTimeField cor(const ScalarTimeField& theta_o, const VectorTimeField& w) { return product(theta_o, w); }

VectorTimeField diffusion_defect(const Perturbation& P, const DiffOperator& L) {
  if (L.order() > P.ps.p())
    throw std::invalid_argument("diffusion_defect: operator order " + std::to_string(L.order()) + " exceeds p = " +
                                std::to_string(P.ps.p()));
  VectorTimeField out = shell(P, P.theta.theta_p.max_order());
  if (out.t_lo > out.t_hi || L.empty()) {
    out.t_lo = 1.0;
    out.t_hi = 0.0;
    return out;
  }
  auto tp = std::make_shared<const SeparatedField>(P.theta.theta_p);
  out.fn = [tp, L](double t, int m) { return anti_divergence_projected(L.apply(tp->eval_scalar(t, m) * -1.0)); };
  return out;
}

std::vector<std::pair<std::string, const VectorTimeField*>> DefectParts::named() const {
  std::vector<std::pair<std::string, const VectorTimeField*>> v{
      {"R_osc_x", &osc_x}, {"R_osc_t", &osc_t}, {"R_acc", &acc}, {"R_lin", &lin}, {"R_cor", &cor}};
  if (diffusion) v.push_back({"R_L", &*diffusion});
  return v;
}

DefectParts make_parts(const Perturbation& P, const DefectTriple& in, const DiffOperator* L) {
  const Grid& g = P.blocks->grid();
  DefectTriple up = lift(in, g);
  VectorTimeField w = memoize(P.w.as_vector(), 4);
  ScalarTimeField theta = memoize(P.theta.theta, 4);
  ScalarTimeField theta_o = memoize(P.theta.theta_o.as_scalar(), 4);
  DefectParts parts{memoize(osc_x(P), 2), memoize(osc_t(P), 2), memoize(acc(P), 2),
                    memoize(lin(theta, up.u, up.rho, w), 2), memoize(cor(theta_o, w), 2), std::nullopt};
  // outside the coefficient support theta vanishes, so lin and cor do too
  auto [lo, hi] = coeff_support(P);
  for (VectorTimeField* f : {&parts.lin, &parts.cor}) {
    f->t_lo = std::max(f->t_lo, lo);
    f->t_hi = std::min(f->t_hi, hi);
  }
  if (L) parts.diffusion = diffusion_defect(P, *L);
  return parts;
}

VectorTimeField assemble_R1(const DefectParts& parts) {
  const Grid& g = parts.osc_x.grid;
  for (const auto& [name, f] : parts.named())
    if (f->grid != g || f->ncomp != parts.osc_x.ncomp)
      throw std::invalid_argument("assemble_R1: grid mismatch in part " + name);
  VectorTimeField R1 = parts.osc_x + parts.osc_t + parts.acc + parts.lin + parts.cor;
  if (parts.diffusion) R1 = R1 + *parts.diffusion;
  return memoize(R1, 4);
}

DefectTriple next_triple(const Perturbation& P, const DefectTriple& in, const DefectParts& parts) {
  const Grid& g = P.blocks->grid();
  DefectTriple up = lift(in, g);
  DefectTriple out;
  out.rho = memoize(up.rho + P.theta.theta, 4);
  out.u = memoize(up.u + P.w.as_vector(), 4);
  out.R = assemble_R1(parts);
  return out;
}

double residual_at(const DefectTriple& tr, double t) {
  const PeriodicField dr = tr.rho(t, 1);
  const PeriodicField r = tr.rho(t, 0);
  const VectorField u = tr.u(t, 0);
  const VectorField R = tr.R(t, 0);
  const PeriodicField res = dr + divergence(u.scaled(r)) - divergence(R);
  return l2_norm(res) / (1.0 + l2_norm(dr));
}

ResidualReport residual(const DefectTriple& tr, const std::vector<double>& times) {
  ResidualReport rep;
  for (double t : times) {
    rep.times.push_back(t);
    rep.values.push_back(residual_at(tr, t));
    rep.max = std::max(rep.max, rep.values.back());
  }
  return rep;
}

double telescoping_at(const Perturbation& P, const DefectParts& parts, double t) {
  const Grid& g = P.blocks->grid();
  const PeriodicField lhs = divergence(parts.osc_x(t) + parts.osc_t(t) + parts.acc(t));
  const PeriodicField dtheta = P.theta.theta(t, 1);
  const PeriodicField tp = P.theta.theta_p.eval_scalar(t, 0);
  const VectorField w = P.w.eval(t, 0);
  VectorField R = VectorField::zeros(g, g.d);
  {
    std::vector<PeriodicField> comps(g.d, PeriodicField(g));
    for (const auto& c : P.Rk) comps[c.k] = c.field(t, 0);
    R = VectorField(std::move(comps));
  }
  const PeriodicField a = divergence(w.scaled(tp)), b = divergence(R);
  const PeriodicField rhs = dtheta + a + b;
  const double scale = l2_norm(dtheta) + l2_norm(a) + l2_norm(b);
  const double diff = l2_norm(lhs - rhs);
  return scale > 0 ? diff / scale : diff;
}

double o3_cancellation_at(const Perturbation& P, const DefectParts& parts, double t) {
  const Grid& g = P.blocks->grid();
  PeriodicField lhs = P.theta.theta_o.eval_scalar(t, 1);
  double scale = l2_norm(lhs);
  for (const auto& c : P.Rk) {
    const PeriodicField dk = derivative(c.field(t, 0), c.k);
    const double gg = P.prof.product[c.k].eval(t, 0);
    lhs = lhs + dk * (1.0 - gg);
    scale += l2_norm(dk) * (1.0 + std::abs(gg));
  }
  (void)g;
  const PeriodicField rhs = divergence(parts.osc_t(t));
  const double diff = l2_norm(lhs - rhs);
  return scale > 0 ? diff / scale : diff;
}

double diffusion_identity_at(const Perturbation& P, const DefectParts& parts, const DiffOperator& L, double t) {
  if (!parts.diffusion) throw std::invalid_argument("diffusion_identity_at: parts carry no diffusion defect");
  const Grid& g = P.blocks->grid();
  PeriodicField s(g);
  for (const auto& c : P.Rk) {
    const double a = P.prof.g_tilde[c.k].eval(t, 0);
    if (a != 0.0) s = s + c.field(t, 0) * P.blocks->block(c.k).Phi * a;
  }
  const PeriodicField rhs = project_mean_zero(L.apply(s));
  const PeriodicField lhs = divergence((*parts.diffusion)(t));
  const double scale = l2_norm(rhs), diff = l2_norm(lhs - rhs);
  return scale > 0 ? diff / scale : diff;
}

std::vector<double> probe_times(const ProfileSet& prof, double t_lo, double t_hi, int count) {
  std::vector<std::pair<double, double>> bumps;
  for (const auto& g : prof.g_tilde)
    for (const auto& iv : g.bump_intervals()) bumps.push_back(iv);
  std::sort(bumps.begin(), bumps.end());
  std::vector<double> inside, outside;
  auto add_gap = [&](double a, double b) {
    for (double f : {0.5, 0.25, 0.75})
      if (b > a && a + f * (b - a) > t_lo && a + f * (b - a) < t_hi) outside.push_back(a + f * (b - a));
  };
  double prev_end = 0.0;
  for (const auto& [a, b] : bumps) {
    for (double f : {0.3, 0.5, 0.62, 0.15, 0.42, 0.75, 0.88}) {
      const double t = a + f * (b - a);
      if (t > t_lo && t < t_hi) inside.push_back(t);
    }
    add_gap(prev_end, a);
    prev_end = std::max(prev_end, b);
  }
  add_gap(prev_end, 1.0);
  std::sort(inside.begin(), inside.end());
  std::sort(outside.begin(), outside.end());
  // evenly spread picks, without repeats
  auto pick = [](const std::vector<double>& v, int n) {
    std::vector<double> out;
    if (v.empty() || n <= 0) return out;
    for (int i = 0; i < n; ++i) out.push_back(v[(static_cast<std::size_t>(i) * v.size()) / n]);
    return out;
  };
  const int n_out = std::min<int>(count / 2, outside.size());
  const int n_in = std::min<int>(count - n_out, inside.size());
  std::vector<double> t = pick(outside, std::min<int>(count - n_in, outside.size()));
  for (double x : pick(inside, n_in)) t.push_back(x);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace ci
