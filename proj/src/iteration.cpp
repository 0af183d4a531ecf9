#include "convint/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ci {

namespace {

constexpr double kTwoPi = 6.283185307179586;

TimeFn time_factor(const TargetTerm& term, int shift) {
  const SmoothBump eta = term.eta;
  const double a = term.amplitude;
  return [eta, a, shift](double t, int order) { return a * eta.derivative(t, order + shift); };
}

double sup_derivative(const SmoothBump& eta, int order) {
  double m = 0.0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(eta.derivative(eta.lo() + (eta.hi() - eta.lo()) * i / n, order)));
  return m;
}

double l1_derivative(const SmoothBump& eta, int order) {
  double acc = 0.0;
  const int n = 20000;
  const double h = (eta.hi() - eta.lo()) / n;
  for (int i = 0; i < n; ++i) acc += std::abs(eta.derivative(eta.lo() + (i + 0.5) * h, order));
  return acc * h;
}

double magnitude_sup(const VectorField& v) {
  const std::size_t n = v.grid().size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < v.ncomp(); ++c) s += v[c][i] * v[c][i];
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

double mean_abs(const PeriodicField& f) {
  double acc = 0.0;
  for (double x : f.values()) acc += std::abs(x);
  return acc / static_cast<double>(f.values().size());
}

double highest_frequency(const PeriodicField& f) {
  const auto& c = f.spectrum();
  double cmax = 0.0;
  for (const auto& z : c) cmax = std::max(cmax, std::abs(z));
  double kmax = 0.0;
  for_each_mode(f.grid(), [&](std::size_t i, const std::array<int, 3>& k) {
    if (std::abs(c[i]) <= 1e-10 * cmax) return;
    kmax = std::max(kmax, std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]));
  });
  return kTwoPi * kmax;
}

double log_or_zero(double x) { return x > 0.0 ? std::log(x) : FieldBounds::kZero; }

}  // namespace

std::pair<double, double> TargetDensity::support() const {
  double lo = 1.0, hi = 0.0;
  for (const auto& t : terms) {
    lo = std::min(lo, t.eta.lo());
    hi = std::max(hi, t.eta.hi());
  }
  return {lo, hi};
}

ScalarTimeField TargetDensity::on(const Grid& g) const {
  if (terms.empty()) return ScalarTimeField::zero(g);
  std::vector<std::pair<TimeFn, PeriodicField>> parts;
  for (const auto& t : terms) parts.emplace_back(time_factor(t, 0), PeriodicField::from_function(g, t.space));
  auto [lo, hi] = support();
  return separated_scalar(g, std::move(parts), lo, hi, 4);
}

TargetDensity TargetDensity::single_mode(int d) {
  TargetDensity td;
  td.d = d;
  td.terms.push_back({SmoothBump(0.1, 0.9, 1.0), 1.0, [](const Point& x) { return std::sin(kTwoPi * x[0]); },
                      "sin(2 pi x1)"});
  return td;
}

TargetDensity TargetDensity::two_mode(int d) {
  TargetDensity td;
  td.d = d;
  td.terms.push_back({SmoothBump(0.1, 0.9, 1.0), 1.0,
                      [](const Point& x) { return std::sin(kTwoPi * x[0]) + std::cos(2.0 * kTwoPi * x[1]); },
                      "sin(2 pi x1) + cos(4 pi x2)"});
  return td;
}

TargetDensity TargetDensity::zero(int d) {
  TargetDensity td;
  td.d = d;
  return td;
}

void validate_target(const TargetDensity& target, const Grid& g) {
  if (target.d != g.d) throw std::invalid_argument("target density: dimension does not match the grid");
  for (const auto& t : target.terms) {
    if (!t.space) throw std::invalid_argument("target density: term '" + t.label + "' has no spatial factor");
    if (t.eta.lo() <= 0.0 || t.eta.hi() >= 1.0)
      throw std::invalid_argument("target density: temporal support of '" + t.label + "' must lie inside (0,1)");
    const PeriodicField F = PeriodicField::from_function(g, t.space);
    if (std::abs(F.mean()) > 1e-12 * std::max(1.0, F.max_abs()))
      throw std::invalid_argument("target density: term '" + t.label + "' is not mean-zero");
  }
}

DefectTriple init_triple(const TargetDensity& target, const Grid& g) {
  validate_target(target, g);
  DefectTriple tr;
  tr.rho = target.on(g);
  tr.u = VectorTimeField::zero(g, g.d);
  if (target.empty()) {
    tr.R = VectorTimeField::zero(g, g.d);
    return tr;
  }
  std::vector<std::pair<TimeFn, VectorField>> parts;
  for (const auto& t : target.terms)
    parts.emplace_back(time_factor(t, 1), anti_divergence(PeriodicField::from_function(g, t.space)));
  auto [lo, hi] = target.support();
  tr.R = separated_vector(g, std::move(parts), lo, hi, 3);
  return tr;
}

FieldBounds init_bounds(const TargetDensity& target, int n) {
  FieldBounds b;
  if (target.empty()) return b;
  const Grid g(target.d, n);
  validate_target(target, g);
  double supR = 0.0, l1R = 0.0, fx = 0.0, ft = 0.0, sup_rho = 0.0;
  for (const auto& t : target.terms) {
    const PeriodicField F = PeriodicField::from_function(g, t.space);
    const VectorField RF = anti_divergence(F);
    const double a = std::abs(t.amplitude);
    const double d1 = sup_derivative(t.eta, 1);
    supR += a * d1 * magnitude_sup(RF);
    double rf_l1 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0.0;
      for (int c = 0; c < RF.ncomp(); ++c) s += RF[c][i] * RF[c][i];
      rf_l1 += std::sqrt(s);
    }
    l1R += a * l1_derivative(t.eta, 1) * rf_l1 / static_cast<double>(g.size());
    fx = std::max(fx, highest_frequency(F));
    for (int j = 1; j <= 3; ++j) ft = std::max(ft, std::pow(sup_derivative(t.eta, 1 + j) / d1, 1.0 / j));
    sup_rho += a * sup_derivative(t.eta, 0) * F.max_abs();
  }
  b.log_sup_R = log_or_zero(supR);
  b.log_L1_R = log_or_zero(l1R);
  b.log_freq_x = std::log(std::max(1.0, fx));
  b.log_freq_t = std::log(std::max(1.0, ft));
  b.log_sup_rho = log_or_zero(sup_rho);
  return b;
}

void StepConfig::validate() const {
  if (p < 1) throw std::invalid_argument("StepConfig: p must be a positive integer");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("StepConfig: delta must lie in (0, 1/2)");
  if (!(lambda0 > 1.0) || !(growth > 1.0) || max_tries < 1)
    throw std::invalid_argument("StepConfig: lambda ladder needs lambda0 > 1, growth > 1, max_tries >= 1");
  if (L && L->order() > p) throw std::invalid_argument("StepConfig: operator order exceeds p");
}

ScalingStepResult scaling_step(const FieldBounds& in, const StepConfig& cfg, const SpatialProfile& profile) {
  cfg.validate();
  const Exponents ex = choose_exponents(profile.d(), cfg.p);
  const DiffOperator* L = cfg.L ? &*cfg.L : nullptr;
  const double ldelta = std::log(cfg.delta);
  ScalingStepResult best;
  double best_excess = std::numeric_limits<double>::infinity();
  long long evals = 0;

  // returns the largest log-excess over the targets (<= 0 means accepted)
  auto try_rung = [&](long long j, ScalingStepResult& out) {
    ++evals;
    out = ScalingStepResult{};
    out.rung = j;
    const double ll = std::log(cfg.lambda0) + static_cast<double>(j) * std::log(cfg.growth);
    try {
      out.ps = realize_log(ex, ll);
    } catch (const std::exception&) {
      out.failing.push_back("realize");
      return std::numeric_limits<double>::infinity();
    }
    out.est = estimate_step(in, out.ps, profile, L);
    double excess = -std::numeric_limits<double>::infinity();
    for (const char* key : {"theta", "w", "R1"}) {
      const double e = out.est.log_norm.at(key) - ldelta;
      excess = std::max(excess, e);
      if (e > 0.0) out.failing.push_back(key);
    }
    const ConditionReport cond = check_conditions(out.ps);
    if (!cond.all_pass()) {
      out.failing.push_back("conditions");
      excess = std::max(excess, 1e-300);
    }
    out.accepted = out.failing.empty();
    if (excess < best_excess) {
      best_excess = excess;
      best = out;
    }
    return excess;
  };

  ScalingStepResult cur;
  if (in.zero_R()) {
    try_rung(0, cur);
    cur.accepted = true;
    cur.failing.clear();
    cur.evaluations = evals;
    return cur;
  }
  if (try_rung(0, cur) <= 0.0) {
    cur.evaluations = evals;
    return cur;
  }
  long long lo = 0, hi = -1;
  for (long long j = 1; j < cfg.max_tries; j = j > cfg.max_tries / 2 ? cfg.max_tries - 1 : 2 * j) {
    if (try_rung(j, cur) <= 0.0) {
      hi = j;
      break;
    }
    lo = j;
    if (j == cfg.max_tries - 1) break;
  }
  if (hi < 0) {
    best.accepted = false;
    best.evaluations = evals;
    return best;
  }
  ScalingStepResult accepted = cur;
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (try_rung(mid, cur) <= 0.0) {
      hi = mid;
      accepted = cur;
    } else {
      lo = mid;
    }
  }
  accepted.evaluations = evals;
  return accepted;
}

FieldStepResult field_step(const DefectTriple& in, const StepConfig& cfg,
                           std::shared_ptr<const SpatialProfile> profile, int grid_n) {
  cfg.validate();
  FieldStepResult res;
  const int d = profile->d();
  if (in.grid().d != d) throw std::invalid_argument("field_step: triple and profile dimensions differ");
  const Exponents ex = choose_exponents(d, cfg.p);
  res.ps = realize_override(ex, cfg.sigma, cfg.mu, cfg.kappa);
  if (!in.R.fn || in.R.t_lo > in.R.t_hi) {
    // nothing to cancel: theta = w = 0 and R1 = 0
    res.out = in;
    return res;
  }
  const int n = std::max({mikado_grid_size(*profile, static_cast<int>(cfg.sigma), cfg.mu, cfg.min_grid), grid_n,
                          in.grid().n});
  const Grid g(d, n);
  res.blocks = std::make_shared<const MikadoSet>(build_mikado_set(profile, static_cast<int>(cfg.sigma), cfg.mu, g));
  auto P = std::make_shared<const Perturbation>(build_perturbation(in.R, res.blocks, res.ps));
  const DiffOperator* L = cfg.L ? &*cfg.L : nullptr;
  auto parts = std::make_shared<const DefectParts>(make_parts(*P, in, L));
  res.out = next_triple(*P, in, *parts);
  res.P = P;
  res.parts = parts;
  return res;
}

int RunConfig::p_at(int n) const { return N << n; }
double RunConfig::delta_at(int n) const { return std::ldexp(eps, -n); }

RunResult run(const RunConfig& cfg) {
  RunResult res;
  const int d = cfg.target.d;
  auto profile = make_spatial_profile(d);
  if (cfg.mode == Mode::scaling) {
    FieldBounds b = init_bounds(cfg.target);
    for (int n = 1; n <= cfg.n_max; ++n) {
      StepConfig sc = cfg.base;
      sc.p = cfg.p_at(n);
      sc.delta = cfg.delta_at(n);
      sc.mode = Mode::scaling;
      const ScalingStepResult st = scaling_step(b, sc, *profile);
      StepRecord rec;
      rec.n = n;
      rec.p = sc.p;
      rec.delta = sc.delta;
      rec.ps = st.ps;
      rec.accepted = st.accepted;
      const auto& m = st.est.log_norm;
      auto val = [&](const char* k) { return m.count(k) ? std::exp(m.at(k)) : 0.0; };
      rec.theta_norm = val("theta");
      rec.w_norm = val("w");
      rec.R1_L1 = val("R1");
      rec.theta_L1 = val("theta_L1");
      rec.products_L1 = val("products_L1");
      rec.M_ratio = val("M_ratio");
      for (const char* k : {"R_osc_x", "R_osc_t", "R_acc", "R_lin", "R_cor", "R_L"})
        if (m.count(k)) rec.parts_L1[k] = std::exp(m.at(k));
      res.history.push_back(rec);
      res.cumulative += rec.theta_norm;
      if (!st.accepted) {
        res.accepted = false;
        break;
      }
      b = st.est.out;
    }
    res.final_bounds = b;
    return res;
  }

  if (cfg.field_params.empty()) throw std::invalid_argument("run: identity-check mode needs field parameters");
  DefectTriple tr = init_triple(cfg.target, Grid(d, cfg.init_grid));
  for (int n = 1; n <= cfg.n_max; ++n) {
    StepConfig sc = cfg.base;
    sc.p = cfg.p_at(n);
    sc.delta = cfg.delta_at(n);
    sc.mode = Mode::identity_check;
    const auto& fp = cfg.field_params[std::min<std::size_t>(n - 1, cfg.field_params.size() - 1)];
    sc.sigma = static_cast<std::int64_t>(fp[0]);
    sc.mu = fp[1];
    sc.kappa = fp[2];
    FieldStepResult fs = field_step(tr, sc, profile);
    tr = fs.out;
    StepRecord rec;
    rec.n = n;
    rec.p = sc.p;
    rec.delta = sc.delta;
    rec.ps = fs.ps;
    rec.accepted = true;
    rec.grid_n = tr.grid().n;
    res.history.push_back(rec);
    if (fs.P) res.perturbations.push_back(fs.P);
  }
  res.final_triple = tr;
  return res;
}

double TestFunction::value(const Point& x, double t) const {
  const SmoothBump chi(tlo, thi, 1.0);
  const double ph = kTwoPi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
  return chi(t) * (cosine ? std::cos(ph) : std::sin(ph));
}

void TestFunction::sample(const Grid& g, double t, PeriodicField& phi, PeriodicField& dt, VectorField& grad) const {
  const SmoothBump chi(tlo, thi, 1.0);
  const double c0 = chi.derivative(t, 0), c1 = chi.derivative(t, 1);
  const auto kk = k;
  const bool cs = cosine;
  const PeriodicField trig = PeriodicField::from_function(g, [kk, cs](const Point& x) {
    const double ph = kTwoPi * (kk[0] * x[0] + kk[1] * x[1] + kk[2] * x[2]);
    return cs ? std::cos(ph) : std::sin(ph);
  });
  const PeriodicField dtrig = PeriodicField::from_function(g, [kk, cs](const Point& x) {
    const double ph = kTwoPi * (kk[0] * x[0] + kk[1] * x[1] + kk[2] * x[2]);
    return cs ? -std::sin(ph) : std::cos(ph);
  });
  phi = trig * c0;
  dt = trig * c1;
  std::vector<PeriodicField> comps;
  for (int j = 0; j < g.d; ++j) comps.push_back(dtrig * (c0 * kTwoPi * kk[j]));
  grad = VectorField(std::move(comps));
}

double TestFunction::grad_sup() const {
  const double kn = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]);
  return kTwoPi * kn;  // chi peaks at 1
}

std::vector<TestFunction> test_basis(int d, int count) {
  std::vector<std::array<int, 3>> ks;
  for (int s = 1; static_cast<int>(ks.size()) * 2 < count; ++s) {
    // all wave vectors with max |k_i| = s, one of each +-k pair
    const int z = d == 3 ? s : 0;
    for (int a = -s; a <= s; ++a)
      for (int b = -s; b <= s; ++b)
        for (int c = -z; c <= z; ++c) {
          if (std::max({std::abs(a), std::abs(b), std::abs(c)}) != s) continue;
          const std::array<int, 3> k{a, b, c};
          const std::array<int, 3> nk{-a, -b, -c};
          if (std::find(ks.begin(), ks.end(), nk) != ks.end()) continue;
          ks.push_back(k);
        }
  }
  std::vector<TestFunction> out;
  for (const auto& k : ks)
    for (bool cs : {true, false}) {
      if (static_cast<int>(out.size()) == count) return out;
      TestFunction f;
      f.k = k;
      f.cosine = cs;
      out.push_back(f);
    }
  return out;
}

std::vector<std::pair<double, double>> time_quadrature(const RunResult& res, double t_lo, double t_hi,
                                                       int per_panel, int subdivisions) {
  std::vector<double> cuts{t_lo, t_hi};
  for (const auto& P : res.perturbations)
    for (const auto& gt : P->prof.g_tilde)
      for (const auto& [a, b] : gt.bump_intervals()) {
        if (a > t_lo && a < t_hi) cuts.push_back(a);
        if (b > t_lo && b < t_hi) cuts.push_back(b);
      }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return y - x < 1e-12; }), cuts.end());
  std::vector<double> x(per_panel), w(per_panel);
  {
    // Gauss-Legendre on [-1, 1] by Newton iteration
    for (int i = 0; i < per_panel; ++i) {
      double z = std::cos(M_PI * (i + 0.75) / (per_panel + 0.5)), dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int j = 2; j <= per_panel; ++j) {
          const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = per_panel * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
  std::vector<std::pair<double, double>> nodes;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    for (int s = 0; s < subdivisions; ++s) {
      const double a = cuts[c] + (cuts[c + 1] - cuts[c]) * s / subdivisions;
      const double b = cuts[c] + (cuts[c + 1] - cuts[c]) * (s + 1) / subdivisions;
      const double h = 0.5 * (b - a), m = 0.5 * (a + b);
      for (int i = 0; i < per_panel; ++i) nodes.emplace_back(m + h * x[i], h * w[i]);
    }
  }
  return nodes;
}

WeakFormReport weak_form_check(const RunResult& field, const RunResult& scaling, const TargetDensity& target,
                               int count, int quad_nodes, int quad_subdivisions) {
  if (!field.final_triple) throw std::invalid_argument("weak_form_check: field run has no final triple");
  if (scaling.history.empty()) throw std::invalid_argument("weak_form_check: scaling run has no steps");
  WeakFormReport rep;
  const DefectTriple& tr = *field.final_triple;
  const Grid& g = tr.grid();
  const auto basis = test_basis(g.d, count);
  const auto nodes = time_quadrature(field, basis.front().tlo, basis.front().thi, quad_nodes, quad_subdivisions);
  const std::size_t nb = basis.size();
  std::vector<double> pair(nb, 0.0), def(nb, 0.0), res_int(nb, 0.0), dprod(nb, 0.0), dprod_scale(nb, 0.0);
  for (const auto& [t, wt] : nodes) {
    const PeriodicField rho = tr.rho(t, 0), drho = tr.rho(t, 1);
    const VectorField u = tr.u(t, 0), R = tr.R(t, 0);
    const PeriodicField strong = drho + divergence(u.scaled(rho)) - divergence(R);
    const double res_l1 = mean_abs(strong);
    double r_l1 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0.0;
      for (int c = 0; c < g.d; ++c) s += R[c][i] * R[c][i];
      r_l1 += std::sqrt(s);
    }
    rep.R_L1_field += wt * r_l1 / static_cast<double>(g.size());
    for (std::size_t b = 0; b < nb; ++b) {
      PeriodicField phi, dphi;
      VectorField grad;
      basis[b].sample(g, t, phi, dphi, grad);
      PeriodicField u_grad(g);
      for (int j = 0; j < g.d; ++j) u_grad = u_grad + u[j] * grad[j];
      PeriodicField R_grad(g);
      for (int j = 0; j < g.d; ++j) R_grad = R_grad + R[j] * grad[j];
      pair[b] += wt * (rho * (dphi + u_grad)).mean();
      def[b] += wt * R_grad.mean();
      const SmoothBump chi(basis[b].tlo, basis[b].thi, 1.0);
      res_int[b] += wt * res_l1 * chi(t);
      const PeriodicField a = drho * phi, c = rho * dphi;
      dprod[b] += wt * (a + c).mean();
      dprod_scale[b] += wt * (std::abs(a.mean()) + std::abs(c.mean()));
    }
  }
  const auto& last = scaling.history.back();
  rep.R_L1_bound = last.R1_L1;
  double disc_max = 0.0, grad_max = 0.0;
  rep.pairing_pass = true;
  for (std::size_t b = 0; b < nb; ++b) {
    WeakFormRow row;
    row.phi = basis[b];
    row.pairing = pair[b];
    row.defect = def[b];
    row.disc = res_int[b] + std::abs(dprod[b]) + 1e-13 * (dprod_scale[b] + std::abs(pair[b]));
    row.pass = std::abs(row.pairing - row.defect) <= row.disc;
    row.tol = rep.R_L1_bound * basis[b].grad_sup() + row.disc;
    rep.pairing_pass = rep.pairing_pass && row.pass;
    disc_max = std::max(disc_max, row.disc);
    grad_max = std::max(grad_max, basis[b].grad_sup());
    rep.rows.push_back(row);
  }
  rep.tol_weak = rep.R_L1_bound * grad_max + disc_max;

  // ||rho~||_{L^1_{t,x}} by quadrature on the target's own support
  auto [lo, hi] = target.support();
  const ScalarTimeField rt = target.on(g);
  RunResult plain;
  for (const auto& [t, wt] : time_quadrature(plain, lo, hi, 32, 8)) rep.rho_tilde_L1 += wt * mean_abs(rt(t, 0));
  for (const auto& rec : scaling.history) rep.theta_L1_sum += rec.theta_L1;
  rep.rho_lower = rep.rho_tilde_L1 - rep.theta_L1_sum;
  rep.witness_pass = scaling.accepted && rep.rho_lower > 10.0 * rep.tol_weak;
  return rep;
}

}  // namespace ci
