#include "convint/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "convint/defect.hpp"
#include "convint/iteration.hpp"
#include "convint/mikado.hpp"
#include "convint/params.hpp"
#include "convint/scaling.hpp"
#include "convint/temporal.hpp"

namespace ci {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double x) { return fmt_num(x); }

// band-limited random field: normal samples on a coarse grid of m points per axis, spectrally interpolated
PeriodicField random_field(const Grid& g, int m, std::mt19937_64& rng) {
  const Grid coarse(g.d, m);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> v(coarse.size());
  for (auto& x : v) x = N(rng);
  return resample(PeriodicField(coarse, std::move(v)), g);
}

double rel(double err, double scale) { return scale > 0 ? err / scale : err; }

void finish(CriterionResult& c, Clock::time_point t0) {
  c.seconds = since(t0);
  c.pass = !c.rows.empty();
  for (const auto& r : c.rows) c.pass = c.pass && r.pass;
  if (c.time_limit > 0) {
    const bool ok = c.seconds < c.time_limit;
    c.rows.push_back({"C" + std::to_string(c.id) + ".runtime", "plumbing", c.seconds, c.time_limit, 0.0, ok, "seconds"});
    c.pass = c.pass && ok;
  }
}

// ---- 1: antidivergence identities ----
CriterionResult c1(const AcceptanceOptions& opt) {
  CriterionResult c{1, "operator identities", false, 0.0, 60.0, "", {}};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(opt.seed + 1);
  const Grid g(2, 256);
  double worst_R = 0.0, worst_B = 0.0;
  for (int i = 0; i < 50; ++i) {
    const PeriodicField f = random_field(g, 64, rng);
    const PeriodicField a = random_field(g, 32, rng) + 1.5;
    worst_R = std::max(worst_R, rel(l2_norm(divergence(anti_divergence_projected(f)) - project_mean_zero(f)), l2_norm(f)));
    const PeriodicField f0 = project_mean_zero(f);
    const PeriodicField af = a * f0;
    worst_B = std::max(worst_B, rel(l2_norm(divergence(bilinear_antidiv(a, f0)) - project_mean_zero(af)), l2_norm(af)));
  }
  c.rows.push_back({"C1.div_R", "antidivergence identity", worst_R, 0.0, 1e-8, worst_R <= 1e-8, "max over 50 cases, 256^2"});
  c.rows.push_back({"C1.div_B", "bilinear antidivergence identity", worst_B, 0.0, 1e-8, worst_B <= 1e-8, "max over 50 cases"});
  c.detail = "div R rel " + num(worst_R) + ", div B rel " + num(worst_B);
  finish(c, t0);
  return c;
}

// ---- 2: rescaling law ----
CriterionResult c2(const AcceptanceOptions& opt) {
  CriterionResult c{2, "antidivergence rescaling law", false, 0.0, 0.0, "", {}};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(opt.seed + 2);
  const Grid coarse(2, 32), fine(2, 256);
  for (int sigma : {2, 3, 8}) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const PeriodicField f = project_mean_zero(random_field(coarse, 16, rng));
      const VectorField lhs = anti_divergence(rescale(f, sigma, fine));
      const VectorField Rf = anti_divergence(f);
      std::vector<PeriodicField> comps;
      for (int a = 0; a < 2; ++a) comps.push_back(rescale(Rf[a], sigma, fine) * (1.0 / sigma));
      const VectorField rhs(std::move(comps));
      worst = std::max(worst, rel(l2_norm(lhs - rhs), l2_norm(rhs)));
    }
    c.rows.push_back({"C2.sigma" + std::to_string(sigma), "antidivergence rescaling", worst, 0.0, 1e-10, worst <= 1e-10,
                      "max over 10 cases"});
    c.detail += (c.detail.empty() ? "" : ", ") + ("sigma=" + std::to_string(sigma) + ": " + num(worst));
  }
  finish(c, t0);
  return c;
}

// ---- 3: building-block suite ----
CriterionResult c3(const AcceptanceOptions&) {
  CriterionResult c{3, "building-block suite", false, 0.0, 120.0, "", {}};
  const auto t0 = Clock::now();
  auto prof = make_spatial_profile(2);
  int total = 0, failed = 0;
  for (int sigma : {1, 2, 4})
    for (double mu : {4.0, 8.0, 16.0}) {
      int n = 64;
      while (n < 64 * sigma * mu) n *= 2;
      const auto rows = check_mikado(*prof, sigma, mu, Grid(2, n));
      double worst = 0.0;
      bool ok = true;
      for (const auto& r : rows) {
        ++total;
        if (!r.pass) ++failed;
        ok = ok && r.pass;
        worst = std::max(worst, r.tolerance > 0 ? std::abs(r.measured - r.target) / r.tolerance : std::abs(r.measured - r.target));
      }
      std::ostringstream id;
      id << "C3.sigma" << sigma << "_mu" << mu;
      c.rows.push_back({id.str(), "building-block properties", worst, 0.0, 1.0, ok,
                        std::to_string(rows.size()) + " rows on " + std::to_string(n) + "^2; measured = worst error/tolerance"});
    }
  c.detail = std::to_string(total - failed) + "/" + std::to_string(total) + " property rows pass";
  finish(c, t0);
  return c;
}

// ---- 4: temporal suite ----

// composite 30-point Gauss-Legendre on equal panels
double panel_gauss(const std::function<double(double)>& f, double a, double b, int panels = 48) {
  double acc = 0.0;
  for (int i = 0; i < panels; ++i)
    acc += boost::math::quadrature::gauss<double, 30>::integrate(f, a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels);
  return acc;
}

// int_a^b |f|^q, split at sign changes found on a sample
double abs_pow_integral(const std::function<double(double)>& f, double a, double b, double q) {
  std::vector<double> cuts{a};
  const int samples = 100;
  double x0 = a, f0 = f(a);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = a + (b - a) * i / samples, f1 = f(x1);
    if ((f0 < 0) != (f1 < 0) && f0 != 0.0 && f1 != 0.0) {
      double lo = x0, hi = x1;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) < 0) == (f0 < 0)) lo = mid;
        else hi = mid;
      }
      cuts.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  cuts.push_back(b);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += panel_gauss([&](double t) { return std::pow(std::abs(f(t)), q); }, cuts[i], cuts[i + 1]);
  return acc;
}

std::vector<double> breakpoints(const TemporalProfile& p) {
  std::vector<double> b{0.0, 1.0};
  const double ik = 1.0 / p.scales().kappa, s = p.scales().sigma;
  for (int j = 0; j < static_cast<int>(std::llround(s)); ++j) {
    const double w0 = (j + p.offset()) / s;
    for (double f : {0.0, 0.125, 0.875, 1.0}) {
      const double t = w0 + f * ik / s;
      if (t > 0.0 && t < 1.0) b.push_back(t);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double quad_lq(const TemporalProfile& p, double q, int order) {
  const auto b = breakpoints(p);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    acc += abs_pow_integral([&](double t) { return p.eval(t, order); }, b[i], b[i + 1], q);
  return std::pow(acc, 1.0 / q);
}

CriterionResult c4(const AcceptanceOptions&) {
  CriterionResult c{4, "temporal profile suite", false, 0.0, 0.0, "", {}};
  const auto t0 = Clock::now();
  struct Case {
    int d;
    double kappa, sigma, alpha;
  };
  double w_int = 0.0, w_sup = 0.0, w_der = 0.0, w_lq = 0.0;
  for (const Case& cs : {Case{2, 8.0, 2.0, 0.09}, Case{3, 27.0, 3.0, 0.04}, Case{2, 100.0, 5.0, 0.09}}) {
    const TimeScales ts = TimeScales::make(cs.d, cs.kappa, cs.sigma, cs.alpha);
    for (int k = 0; k < cs.d; ++k) {
      const TemporalProfile gt(ProfileKind::g_tilde, k, ts), g(ProfileKind::g_small, k, ts),
          pr(ProfileKind::product, k, ts), h(ProfileKind::h_corrector, k, ts);
      // int g~_k g_k over [0,1]
      const auto b = breakpoints(gt);
      double I = 0.0;
      for (std::size_t i = 0; i + 1 < b.size(); ++i)
        I += panel_gauss([&](double t) { return gt(t) * g(t); }, b[i], b[i + 1]);
      w_int = std::max(w_int, std::abs(I - 1.0));
      // sup |h_k| on a dense sample
      for (int i = 0; i <= 40000; ++i) w_sup = std::max(w_sup, std::abs(h(i / 40000.0)));
      // sigma^{-1} h_k' against g~_k g_k - 1, derivative by finite differences of h itself
      const double step = 1e-3 / (cs.kappa * cs.sigma);
      for (int i = 0; i < 1000; ++i) {
        const double t = (i + 0.5) / 1000.0;
        auto d5 = [&](double e) { return (-h(t + 2 * e) + 8 * h(t + e) - 8 * h(t - e) + h(t - 2 * e)) / (12 * e); };
        const double fd = (16.0 * d5(step) - d5(2.0 * step)) / 15.0;  // one Richardson step: O(step^6)
        const double rhs = gt(t) * g(t) - 1.0;
        w_der = std::max(w_der, std::abs(fd / cs.sigma - rhs) / std::max(1.0, std::abs(rhs)));
      }
      for (double q : {1.0, 1.5, 2.0, 3.0, 4.0}) {
        for (const TemporalProfile* p : {&gt, &g, &pr, &h}) {
          const int max_order = p->kind() == ProfileKind::h_corrector ? 0 : 1;
          for (int o = 0; o <= max_order; ++o) {
            const double exact = p->lq_norm(q, o), numeric = quad_lq(*p, q, o);
            w_lq = std::max(w_lq, std::abs(exact - numeric) / numeric);
          }
        }
      }
    }
  }
  c.rows.push_back({"C4.int_gg", "profile normalization", w_int, 0.0, 1e-10, w_int <= 1e-10, "max |int g~_k g_k - 1|"});
  c.rows.push_back({"C4.h_sup", "corrector bound", w_sup, 1.0, 0.0, w_sup <= 1.0, "max |h_k|"});
  c.rows.push_back({"C4.h_derivative", "corrector derivative", w_der, 0.0, 1e-8, w_der <= 1e-8, "1000 points per profile"});
  c.rows.push_back({"C4.Lq_closed_form", "profile norms", w_lq, 0.0, 1e-8, w_lq <= 1e-8, "relative, q in {1,1.5,2,3,4}"});
  c.detail = "int " + num(w_int) + ", sup h " + num(w_sup) + ", h' " + num(w_der) + ", L^q " + num(w_lq);
  finish(c, t0);
  return c;
}

// ---- 5: telescoping identity ----
StepConfig identity_step(int p, std::int64_t sigma, double mu, double kappa) {
  StepConfig sc;
  sc.p = p;
  sc.delta = 0.25;
  sc.mode = Mode::identity_check;
  sc.sigma = sigma;
  sc.mu = mu;
  sc.kappa = kappa;
  return sc;
}

CriterionResult c5(const AcceptanceOptions&) {
  CriterionResult c{5, "telescoping identity", false, 0.0, 120.0, "", {}};
  const auto t0 = Clock::now();
  auto prof = make_spatial_profile(2);
  const DefectTriple tr = init_triple(TargetDensity::single_mode(2), Grid(2, 64));
  const FieldStepResult fs = field_step(tr, identity_step(2, 2, 8.0, 8.0), prof, 1024);
  const auto times = probe_times(fs.P->prof, tr.R.t_lo, tr.R.t_hi, 20);
  double tele = 0.0, o3 = 0.0;
  for (double t : times) {
    tele = std::max(tele, telescoping_at(*fs.P, *fs.parts, t));
    o3 = std::max(o3, o3_cancellation_at(*fs.P, *fs.parts, t));
  }
  c.rows.push_back({"C5.telescoping", "telescoping identity", tele, 0.0, 1e-6, tele <= 1e-6,
                    std::to_string(times.size()) + " probe times, 1024^2"});
  c.rows.push_back({"C5.o3_cancellation", "corrector cancellation", o3, 0.0, 1e-6, o3 <= 1e-6, "same probes"});
  c.rows.push_back({"C5.probe_count", "plumbing", static_cast<double>(times.size()), 20.0, 0.0, times.size() == 20, ""});
  c.detail = "max relative " + num(tele) + " over " + std::to_string(times.size()) + " probes";
  finish(c, t0);
  return c;
}

// ---- 6: post-step residual under refinement ----
CriterionResult c6(const AcceptanceOptions&) {
  CriterionResult c{6, "post-step residual refinement", false, 0.0, 0.0, "", {}};
  const auto t0 = Clock::now();
  auto prof = make_spatial_profile(2);
  const DefectTriple tr = init_triple(TargetDensity::two_mode(2), Grid(2, 64));
  double res[2] = {0.0, 0.0};
  const int grids[2] = {128, 256};
  for (int i = 0; i < 2; ++i) {
    const FieldStepResult fs = field_step(tr, identity_step(2, 1, 3.0, 8.0), prof, grids[i]);
    for (double t : probe_times(fs.P->prof, tr.R.t_lo, tr.R.t_hi, 20)) res[i] = std::max(res[i], residual_at(fs.out, t));
  }
  const double gain = res[1] > 0 ? res[0] / res[1] : std::numeric_limits<double>::infinity();
  c.rows.push_back({"C6.residual_128", "post-step defect equation", res[0], 0.0, 1e-5, res[0] <= 1e-5, "sigma=1 mu=3 kappa=8"});
  c.rows.push_back({"C6.refinement_gain", "spectral refinement", gain, 100.0, 0.0, gain >= 100.0, "residual(128)/residual(256)"});
  c.detail = "128^2: " + num(res[0]) + ", 256^2: " + num(res[1]);
  finish(c, t0);
  return c;
}

// ---- 7: exponent conditions ----
CriterionResult c7(const AcceptanceOptions&) {
  CriterionResult c{7, "exponent conditions", false, 0.0, 1.0, "", {}};
  const auto t0 = Clock::now();
  int ok = 0, total = 0;
  for (int d : {2, 3})
    for (int p : {1, 2, 4}) {
      const Exponents ex = choose_exponents(d, p);
      const ConditionReport rep = check_conditions(ex);
      bool exact = true;
      for (const auto& r : rep.rows) exact = exact && r.pass_exact;
      ++total;
      ok += exact ? 1 : 0;
      std::ostringstream id;
      id << "C7.d" << d << "_p" << p;
      std::ostringstream note;
      note << "alpha=" << ex.alpha << " gamma=" << ex.gamma << " r=" << ex.r;
      c.rows.push_back({id.str(), "exponent conditions", exact ? 1.0 : 0.0, 1.0, 0.0, exact, note.str()});
    }
  Exponents bad = choose_exponents(2, 2);
  const Rational dm1(bad.d - 1);
  bad.r = dm1 / (dm1 - bad.gamma) + Rational(1, 10);
  const bool rejected = !check_conditions(bad).all_pass();
  std::ostringstream note;
  note << "r=" << bad.r << " must be rejected";
  c.rows.push_back({"C7.infeasible_r", "exponent conditions", rejected ? 1.0 : 0.0, 1.0, 0.0, rejected, note.str()});
  c.detail = std::to_string(ok) + "/" + std::to_string(total) + " exponent sets pass; infeasible r " +
             (rejected ? "rejected" : "accepted");
  finish(c, t0);
  return c;
}

// ---- 8: scaling-mode decay ----
CriterionResult c8(const AcceptanceOptions&) {
  CriterionResult c{8, "scaling-mode decay", false, 0.0, 0.0, "", {}};
  const auto t0 = Clock::now();
  auto prof = make_spatial_profile(2);
  const Exponents ex = choose_exponents(2, 2);
  const FieldBounds in = init_bounds(TargetDensity::single_mode(2));
  for (const char* q : {"theta", "w", "R1"}) {
    const ScalingStudy st = scaling_study(q, {16.0, 64.0, 256.0}, ex, in, *prof);
    c.rows.push_back({std::string("C8.slope_") + q, "lambda^-gamma decay", st.fit.slope, st.threshold, 0.0, st.pass,
                      "fit residual " + num(st.fit.residual)});
    c.detail += (c.detail.empty() ? "" : ", ") + (std::string(q) + " " + num(st.fit.slope));
  }
  c.detail += " (threshold " + num(-ex.gamma.to_double() + 0.05) + ")";
  finish(c, t0);
  return c;
}

// ---- 9: improved Hoelder decay ----
CriterionResult c9(const AcceptanceOptions& opt) {
  CriterionResult c{9, "improved Hoelder decay", false, 0.0, 0.0, "", {}};
  const auto t0 = Clock::now();
  const double r = 1.05, need = 0.7 * std::pow(2.0, 1.0 / r);
  const auto fam = holder_family(8, 512, opt.seed + 9);
  double worst_ratio = std::numeric_limits<double>::infinity(), worst_bound = 0.0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    std::vector<double> gaps;
    for (int s : {4, 8, 16, 32}) {
      const double gp = improved_holder_gap(fam[i].a, fam[i].f, s, r);
      gaps.push_back(gp);
      const double bound = 2.0 * std::pow(s, -1.0 / r) * norm(fam[i].a, NormSpec::Ck(1)) * lp_norm(fam[i].f, r);
      worst_bound = std::max(worst_bound, gp / bound);
    }
    for (std::size_t j = 0; j + 1 < gaps.size(); ++j) worst_ratio = std::min(worst_ratio, gaps[j] / gaps[j + 1]);
  }
  c.rows.push_back({"C9.gap_ratio", "improved Hoelder inequality", worst_ratio, need, 0.0, worst_ratio >= need,
                    "min gap(s)/gap(2s), s in {4,8,16}, r=1.05, 8 cases"});
  c.rows.push_back({"C9.gap_bound", "improved Hoelder inequality", worst_bound, 1.0, 0.0, worst_bound <= 1.0,
                    "max gap / (2 s^{-1/r} |a|_C1 |f|_r)"});
  c.detail = "min ratio " + num(worst_ratio) + " (need " + num(need) + ")";
  finish(c, t0);
  return c;
}

// ---- 10: iteration schedule ----
CriterionResult c10(const AcceptanceOptions&) {
  CriterionResult c{10, "iteration schedule", false, 0.0, 900.0, "", {}};
  const auto t0 = Clock::now();
  RunConfig sc;
  sc.N = 1;
  sc.eps = 0.5;
  sc.n_max = 2;
  const RunResult s = run(sc);
  for (const auto& h : s.history)
    c.rows.push_back({"C10.theta_step" + std::to_string(h.n), "step schedule", h.theta_norm, h.delta, 0.0,
                      h.accepted && h.theta_norm <= h.delta,
                      "p=" + std::to_string(h.p) + " ln(lambda)=" + num(h.ps.log_lambda)});
  const bool full = static_cast<int>(s.history.size()) == sc.n_max;
  c.rows.push_back({"C10.cumulative", "closeness budget", s.cumulative, sc.eps, 0.0, full && s.cumulative <= sc.eps,
                    "sum of L^{p_n}_t C^{p_n} norms bounds L^N_t C^N"});

  RunConfig fc = sc;
  fc.mode = Mode::identity_check;
  fc.init_grid = 128;
  fc.field_params = {{1, 2, 8}, {1, 2, 8}};
  const RunResult f = run(fc);
  const WeakFormReport wf = weak_form_check(f, s, fc.target, 20, 24, 8);
  double worst = 0.0, worst_pair = 0.0;
  for (const auto& r : wf.rows) {
    worst = std::max(worst, std::abs(r.pairing - r.defect) / r.disc);
    worst_pair = std::max(worst_pair, std::abs(r.pairing) / r.tol);
  }
  c.rows.push_back({"C10.weak_identity", "distributional defect equation", worst, 1.0, 0.0, wf.pairing_pass,
                    "max |pairing - R pairing| / independent discretization bound, 20 test functions"});
  c.rows.push_back({"C10.witness", "nonuniqueness witness", wf.rho_lower, 10.0 * wf.tol_weak, 0.0, wf.witness_pass,
                    "lower bound on ||rho||_L1 vs 10 tol_weak; tol_weak = " + num(wf.tol_weak) + " from final ||R||_L1 <= " +
                        num(wf.R_L1_bound)});
  c.detail = "theta/delta per step, cumulative " + num(s.cumulative) + ", witness " + num(wf.rho_lower) + " vs " +
             num(10.0 * wf.tol_weak);
  finish(c, t0);
  return c;
}

// ---- 11: transport-diffusion ----
CriterionResult c11(const AcceptanceOptions&) {
  CriterionResult c{11, "transport-diffusion defect", false, 0.0, 0.0, "", {}};
  const auto t0 = Clock::now();
  auto prof = make_spatial_profile(2);
  const DiffOperator L = DiffOperator::bilaplacian(2);
  StepConfig cfg = identity_step(4, 2, 8.0, 8.0);
  cfg.L = L;
  const DefectTriple tr = init_triple(TargetDensity::single_mode(2), Grid(2, 64));
  const FieldStepResult fs = field_step(tr, cfg, prof, 1024);
  double worst = 0.0;
  const auto times = probe_times(fs.P->prof, tr.R.t_lo, tr.R.t_hi, 20);
  for (double t : times) worst = std::max(worst, diffusion_identity_at(*fs.P, *fs.parts, L, t));
  c.rows.push_back({"C11.divergence_identity", "diffusion defect identity", worst, 0.0, 1e-6, worst <= 1e-6,
                    std::to_string(times.size()) + " probes, L = bilaplacian"});
  const ScalingStudy st = scaling_study("R_L", {16.0, 64.0, 256.0}, choose_exponents(2, 4),
                                        init_bounds(TargetDensity::single_mode(2)), *prof, &L);
  c.rows.push_back({"C11.slope_R_L", "lambda^-gamma decay", st.fit.slope, st.threshold, 0.0, st.pass,
                    "fit residual " + num(st.fit.residual)});
  c.detail = "identity " + num(worst) + ", slope " + num(st.fit.slope);
  finish(c, t0);
  return c;
}

}  // namespace

std::vector<HolderCase> holder_family(int count, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Grid g(2, n);
  std::vector<HolderCase> out;
  for (int c = 0; c < count; ++c) {
    HolderCase hc;
    hc.m = 1 + c % 2;
    const double phase = U(rng), amp = 0.2 + 0.3 * U(rng);
    const int m = hc.m;
    hc.a = PeriodicField::from_function(g, [=](const Point& x) {
      return std::sin(2.0 * M_PI * m * x[0]) * (1.5 + amp * std::cos(2.0 * M_PI * (x[1] + phase)));
    });
    // f stays positive so |f(s.)|^r is smooth and the kinks of |a f(s.)|^r sit on fixed grid lines
    double A[3][3], P[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        A[i][j] = N(rng);
        P[i][j] = 2.0 * M_PI * U(rng);
      }
    hc.f = PeriodicField::from_function(g, [=](const Point& x) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i + j > 0) s += A[i][j] * std::cos(2.0 * M_PI * (i * x[0] + j * x[1]) + P[i][j]);
      return 3.0 + 0.25 * s;
    });
    out.push_back(std::move(hc));
  }
  return out;
}

std::vector<std::pair<int, std::string>> criterion_list() {
  return {{1, "operator identities"},       {2, "antidivergence rescaling law"},
          {3, "building-block suite"},      {4, "temporal profile suite"},
          {5, "telescoping identity"},      {6, "post-step residual refinement"},
          {7, "exponent conditions"},       {8, "scaling-mode decay"},
          {9, "improved Hoelder decay"},    {10, "iteration schedule"},
          {11, "transport-diffusion defect"}};
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static const Fn table[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
  if (id < 1 || id > 11) throw std::out_of_range("run_criterion: id must be 1..11");
  try {
    return table[id - 1](opt);
  } catch (const std::exception& e) {
    CriterionResult c;
    c.id = id;
    c.name = criterion_list()[id - 1].second;
    c.detail = std::string("error: ") + e.what();
    c.rows.push_back({"C" + std::to_string(id) + ".error", "plumbing", 0.0, 0.0, 0.0, false, e.what()});
    return c;
  }
}

Report trivial_suite() {
  Report rep;
  rep.meta("suite", "trivial");
  const Grid g(2, 32);
  auto prof = make_spatial_profile(2);
  const TargetDensity zero = TargetDensity::zero(2);
  const DefectTriple tr = init_triple(zero, g);
  double res = 0.0;
  for (double t : {0.2, 0.5, 0.8}) res = std::max(res, residual_at(tr, t));
  rep.add("trivial.init_residual", "initial triple", res, 0.0, 0.0, res == 0.0);

  const ScalingStepResult st = scaling_step(init_bounds(zero), StepConfig{}, *prof);
  const double th = std::exp(st.est.log_norm.at("theta")), r1 = std::exp(st.est.log_norm.at("R1"));
  rep.add("trivial.scaling_theta", "zero defect step", th, 0.0, 0.0, st.accepted && th == 0.0);
  rep.add("trivial.scaling_R1", "zero defect step", r1, 0.0, 0.0, r1 == 0.0);

  StepConfig sc;
  sc.mode = Mode::identity_check;
  sc.sigma = 1;
  sc.mu = 1.0;
  const FieldStepResult fs = field_step(tr, sc, prof);
  double out = 0.0;
  for (double t : {0.2, 0.5, 0.8}) {
    out = std::max(out, fs.out.rho(t).max_abs());
    out = std::max(out, l2_norm(fs.out.u(t)));
    out = std::max(out, l2_norm(fs.out.R(t)));
  }
  rep.add("trivial.field_step", "zero defect step", out, 0.0, 0.0, out == 0.0 && !fs.P);

  RunConfig rc;
  rc.target = zero;
  rc.n_max = 0;
  const RunResult rr = run(rc);
  rep.add("trivial.run_nmax0", "plumbing", static_cast<double>(rr.history.size()), 0.0, 0.0,
          rr.history.empty() && rr.cumulative == 0.0);

  const PeriodicField a = PeriodicField::constant(g, 2.0);
  const PeriodicField f = PeriodicField::from_function(g, [](const Point& x) { return std::sin(2.0 * M_PI * x[0]); });
  const double gap = improved_holder_gap(a, f, 4, 2.0);
  rep.add("trivial.holder_constant_a", "improved Hoelder inequality", gap, 0.0, 1e-14, gap <= 1e-14);
  return rep;
}

}  // namespace ci
