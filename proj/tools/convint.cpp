#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "convint/acceptance.hpp"
#include "convint/defect.hpp"
#include "convint/iteration.hpp"
#include "convint/mikado.hpp"
#include "convint/params.hpp"
#include "convint/report.hpp"
#include "convint/scaling.hpp"
#include "convint/snapshot.hpp"

namespace fs = std::filesystem;
using namespace ci;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// plain key=value file; keys are long option names, command-line flags win
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    CLI::Option* o = sub->get_option_no_throw("--" + item.name);
    if (!o) throw UsageError("config: unknown key '" + item.name + "'");
    if (o->count() > 0) continue;
    o->add_result(item.inputs);
    o->run_callback();
  }
}

CLI::Option* add_config(CLI::App* sub, std::string& path) {
  return sub->add_option("--config", path, "plain-text key=value file")->check(CLI::ExistingFile);
}

TargetDensity target_by_name(const std::string& name, int d) {
  if (name == "single") return TargetDensity::single_mode(d);
  if (name == "two") return TargetDensity::two_mode(d);
  if (name == "zero") return TargetDensity::zero(d);
  throw UsageError("unknown target '" + name + "' (single, two, zero)");
}

// eta(t) F(x) with F read from a scalar snapshot on its own grid
TargetDensity target_from_snapshot(const std::string& path) {
  const Snapshot s = read_snapshot(path);
  const PeriodicField F = s.field[0];
  const Grid g = F.grid();
  TargetDensity td;
  td.d = g.d;
  td.terms.push_back({SmoothBump(0.1, 0.9, 1.0), 1.0,
                      [F, g](const Point& x) {
                        std::size_t idx = 0;
                        for (int a = 0; a < g.d; ++a)
                          idx = idx * g.n + static_cast<std::size_t>(std::lround(x[a] * g.n)) % g.n;
                        return F[idx];
                      },
                      s.name.empty() ? path : s.name});
  return td;
}

std::ostream& open_or_stdout(const std::string& dir, const std::string& file, std::ofstream& os) {
  if (dir.empty()) return std::cout;
  fs::create_directories(dir);
  os.open(fs::path(dir) / file);
  if (!os) throw std::runtime_error("cannot write " + (fs::path(dir) / file).string());
  return os;
}

Mode parse_mode(const std::string& m) {
  if (m == "scaling") return Mode::scaling;
  if (m == "identity" || m == "identity-check" || m == "identity_check") return Mode::identity_check;
  throw UsageError("unknown mode '" + m + "' (scaling, identity)");
}

std::optional<DiffOperator> parse_operator(const std::string& name, int d) {
  if (name == "none") return std::nullopt;
  if (name == "laplacian") return DiffOperator::laplacian(d);
  if (name == "bilaplacian") return DiffOperator::bilaplacian(d);
  throw UsageError("unknown operator '" + name + "' (none, laplacian, bilaplacian)");
}

double l1(const VectorField& v) { return norm(v, NormSpec::Lp(1.0), 1.0); }

// ---------------------------------------------------------------- params
struct ParamsArgs {
  int d = 2, p = 1;
  std::string alpha, gamma, r, out, config;
  double lambda = 2.0;
};

int cmd_params(const ParamsArgs& a) {
  Exponents ex = choose_exponents(a.d, a.p);
  if (!a.alpha.empty()) ex.alpha = Rational::parse(a.alpha);
  if (!a.gamma.empty()) ex.gamma = Rational::parse(a.gamma);
  if (!a.r.empty()) ex.r = Rational::parse(a.r);
  const ConditionReport rep = check_conditions(ex, a.lambda);
  write_condition_text(std::cout, ex, rep);
  std::ofstream f;
  std::ostream& os = open_or_stdout(a.out, "params.csv", f);
  if (a.out.empty()) std::cout << "\n";
  write_condition_csv(os, rep);
  return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------- blocks
struct BlocksArgs {
  int d = 2, sigma = 1, n = 0;
  double mu = 4.0;
  bool check = false;
  std::string out, config;
};

int cmd_blocks(const BlocksArgs& a) {
  auto prof = make_spatial_profile(a.d);
  // -n is a floor: a grid too coarse for the block profile is raised rather than rejected
  // the property suite resolves div Omega to 1e-8 only at about 64 points per sigma mu
  int need = mikado_grid_size(*prof, a.sigma, a.mu);
  if (a.check)
    while (need < 64.0 * a.sigma * a.mu) need *= 2;
  const int n = std::max(a.n, need);
  if (a.n > 0 && a.n < need) std::cerr << "note: grid raised from " << a.n << " to " << n << " to resolve the blocks\n";
  const Grid g(a.d, n);
  if (!a.check) {
    std::cout << "grid " << g.str() << "\n";
    for (double p : {1.0, 2.0, 4.0})
      std::cout << "p=" << p << "  |Phi|_p=" << block_phi_lp(*prof, a.mu, p) << "  |W|_p=" << block_w_lp(*prof, a.mu, p)
                << "  |Omega|_p=" << block_omega_lp(*prof, a.mu, p) << "\n";
    return 0;
  }
  const auto rows = check_mikado(*prof, a.sigma, a.mu, g);
  std::ofstream f;
  write_check_csv(open_or_stdout(a.out, "blocks.csv", f), rows);
  int fails = 0;
  for (const auto& r : rows) fails += r.pass ? 0 : 1;
  std::cerr << rows.size() - fails << "/" << rows.size() << " rows pass on " << g.str() << "\n";
  return fails == 0 ? 0 : 1;
}

// ---------------------------------------------------------------- step
struct StepArgs {
  int d = 2, p = 2, grid = 0;
  double delta = 0.25, time = 0.5, lambda0 = 16.0, growth = 2.0;
  std::int64_t sigma = 2;
  double mu = 8.0, kappa = 8.0;
  std::string mode = "identity", target = "single", rho_profile, op = "none", out = "out", config;
};

int cmd_step(const StepArgs& a) {
  const TargetDensity target = a.rho_profile.empty() ? target_by_name(a.target, a.d) : target_from_snapshot(a.rho_profile);
  StepConfig sc;
  sc.p = a.p;
  sc.delta = a.delta;
  sc.mode = parse_mode(a.mode);
  sc.lambda0 = a.lambda0;
  sc.growth = a.growth;
  sc.sigma = a.sigma;
  sc.mu = a.mu;
  sc.kappa = a.kappa;
  sc.L = parse_operator(a.op, target.d);
  auto prof = make_spatial_profile(target.d);
  Report rep;
  rep.meta("command", "step");
  rep.meta("mode", a.mode);
  rep.meta("p", a.p);
  rep.meta("delta", a.delta);
  fs::create_directories(a.out);

  if (sc.mode == Mode::scaling) {
    const ScalingStepResult st = scaling_step(init_bounds(target), sc, *prof);
    rep.meta("log_lambda", st.ps.log_lambda);
    std::ofstream csv(fs::path(a.out) / "parts.csv");
    csv << "quantity,log_norm,norm\n";
    for (const auto& [k, v] : st.est.log_norm) csv << k << "," << fmt_num(v) << "," << fmt_num(std::exp(v)) << "\n";
    for (const char* k : {"theta", "w", "R1"}) {
      const double v = std::exp(st.est.log_norm.at(k));
      rep.add(std::string("step.") + k, "step estimate", v, a.delta, 0.0, v <= a.delta);
    }
    rep.add("step.accepted", "plumbing", st.accepted ? 1.0 : 0.0, 1.0, 0.0, st.accepted,
            "rung " + std::to_string(st.rung) + " after " + std::to_string(st.evaluations) + " evaluations");
  } else {
    const int n0 = a.rho_profile.empty() ? 64 : read_snapshot(a.rho_profile).field.grid().n;
    const DefectTriple in = init_triple(target, Grid(target.d, n0));
    const FieldStepResult r = field_step(in, sc, prof, a.grid);
    const Grid g = r.out.grid();
    rep.meta("grid", g.str());
    const DefectTriple in_l = lift(in, g);
    const double t = a.time;
    const PeriodicField theta = r.out.rho(t) - in_l.rho(t);
    const VectorField w = r.out.u(t) - in_l.u(t);
    write_snapshot((fs::path(a.out) / "theta.bin").string(), theta, "theta", t);
    write_snapshot((fs::path(a.out) / "w.bin").string(), w, "w", t);
    write_snapshot((fs::path(a.out) / "R1.bin").string(), r.out.R(t), "R1", t);
    std::ofstream csv(fs::path(a.out) / "parts.csv");
    csv << "part,t,L1,L2\n";
    if (r.parts)
      for (const auto& [name, f] : r.parts->named()) {
        const VectorField v = (*f)(t);
        csv << name << "," << fmt_num(t) << "," << fmt_num(l1(v)) << "," << fmt_num(l2_norm(v)) << "\n";
      }
    double res = 0.0;
    const std::vector<double> times =
        r.P ? probe_times(r.P->prof, in.R.t_lo, in.R.t_hi, 20) : std::vector<double>{0.25, 0.5, 0.75};
    for (double s : times) res = std::max(res, residual_at(r.out, s));
    rep.add("step.residual", "post-step defect equation", res, 0.0, 1e-5, res <= 1e-5,
            std::to_string(times.size()) + " probe times on " + g.str());
  }
  rep.save(a.out, "step");
  rep.write_summary(std::cout);
  return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------- iterate
struct IterateArgs {
  int d = 2, N = 1, n_max = 2, init_grid = 64;
  double eps = 0.5, lambda0 = 16.0, growth = 2.0;
  double sigma = 1, mu = 2, kappa = 8;
  std::string mode = "scaling", target = "single", out = "out", config;
};

int cmd_iterate(const IterateArgs& a) {
  if (a.n_max < 0 || a.n_max > 3) throw UsageError("iterate: n_max must lie in 0..3");
  RunConfig rc;
  rc.target = target_by_name(a.target, a.d);
  rc.eps = a.eps;
  rc.N = a.N;
  rc.n_max = a.n_max;
  rc.mode = parse_mode(a.mode);
  rc.base.lambda0 = a.lambda0;
  rc.base.growth = a.growth;
  rc.field_params = {{a.sigma, a.mu, a.kappa}};
  rc.init_grid = a.init_grid;
  const RunResult res = run(rc);

  fs::create_directories(a.out);
  std::ofstream csv(fs::path(a.out) / "steps.csv");
  csv << "n,p,delta,log_lambda,sigma,mu,kappa,accepted,theta,w,R1,theta_L1,products_L1,M_ratio,grid\n";
  Report rep;
  rep.meta("command", "iterate");
  rep.meta("mode", a.mode);
  rep.meta("N", a.N);
  rep.meta("eps", a.eps);
  rep.meta("n_max", a.n_max);
  for (const auto& h : res.history) {
    csv << h.n << "," << h.p << "," << fmt_num(h.delta) << "," << fmt_num(h.ps.log_lambda) << "," << h.ps.sigma << ","
        << fmt_num(h.ps.mu) << "," << fmt_num(h.ps.kappa) << "," << (h.accepted ? 1 : 0) << "," << fmt_num(h.theta_norm)
        << "," << fmt_num(h.w_norm) << "," << fmt_num(h.R1_L1) << "," << fmt_num(h.theta_L1) << ","
        << fmt_num(h.products_L1) << "," << fmt_num(h.M_ratio) << "," << h.grid_n << "\n";
    if (rc.mode == Mode::scaling)
      rep.add("iterate.theta_step" + std::to_string(h.n), "step schedule", h.theta_norm, h.delta, 0.0,
              h.accepted && h.theta_norm <= h.delta);
  }
  if (rc.mode == Mode::scaling) {
    rep.add("iterate.cumulative", "closeness budget", res.cumulative, a.eps, 0.0,
            res.accepted && res.cumulative <= a.eps);
  } else if (res.final_triple) {
    const DefectTriple& tr = *res.final_triple;
    double worst = 0.0;
    for (double t : {0.2, 0.35, 0.5, 0.65, 0.8}) worst = std::max(worst, residual_at(tr, t));
    rep.add("iterate.residual", "post-step defect equation", worst, 0.0, 1e-5, worst <= 1e-5,
            "final triple on " + tr.grid().str());
    write_snapshot((fs::path(a.out) / "rho.bin").string(), tr.rho(0.5), "rho", 0.5);
    write_snapshot((fs::path(a.out) / "u.bin").string(), tr.u(0.5), "u", 0.5);
    write_snapshot((fs::path(a.out) / "R.bin").string(), tr.R(0.5), "R", 0.5);
  }
  rep.save(a.out, "iterate");
  rep.write_summary(std::cout);
  return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------- verify
struct VerifyArgs {
  std::string suite = "trivial", out, config;
  std::vector<int> criteria;
  std::uint64_t seed = AcceptanceOptions{}.seed;
};

int cmd_verify(const VerifyArgs& a) {
  Report rep;
  rep.meta("suite", a.suite);
  if (a.suite == "trivial") {
    rep = trivial_suite();
  } else if (a.suite == "acceptance") {
    rep.meta("seed", std::to_string(a.seed));
    AcceptanceOptions opt;
    opt.seed = a.seed;
    std::vector<int> ids = a.criteria;
    if (ids.empty())
      for (const auto& [id, name] : criterion_list()) ids.push_back(id);
    for (int id : ids) {
      if (id < 1 || id > 11) throw UsageError("verify: criterion ids run 1..11");
      const CriterionResult c = run_criterion(id, opt);
      std::cout << (c.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << c.id << "  " << c.name << "  ("
                << std::fixed << std::setprecision(1) << c.seconds << " s)  " << c.detail << std::endl;
      std::cout.unsetf(std::ios::fixed);
      for (const auto& r : c.rows) rep.add(r);
    }
  } else {
    throw UsageError("unknown suite '" + a.suite + "' (trivial, acceptance)");
  }
  if (!a.out.empty()) rep.save(a.out, "verify");
  rep.write_summary(std::cout);
  return rep.all_pass() ? 0 : 1;
}

// ---------------------------------------------------------------- scaling
struct ScalingArgs {
  int d = 2, p = 2;
  std::string quantity = "theta", target = "single", op = "none", out, config;
  std::vector<double> lambdas{16.0, 64.0, 256.0};
};

int cmd_scaling(const ScalingArgs& a) {
  if (a.lambdas.size() < 3) throw UsageError("scaling: need at least 3 lambda values");
  auto prof = make_spatial_profile(a.d);
  const auto L = parse_operator(a.op, a.d);
  const ScalingStudy st = scaling_study(a.quantity, a.lambdas, choose_exponents(a.d, a.p),
                                        init_bounds(target_by_name(a.target, a.d)), *prof, L ? &*L : nullptr);
  std::ofstream f;
  std::ostream& os = open_or_stdout(a.out, "scaling.csv", f);
  os << "quantity,lambda,log_lambda,log_norm\n";
  for (std::size_t i = 0; i < st.lambdas.size(); ++i)
    os << a.quantity << "," << fmt_num(st.lambdas[i]) << "," << fmt_num(std::log(st.lambdas[i])) << ","
       << fmt_num(st.log_values[i]) << "\n";
  std::cout << a.quantity << ": slope " << fmt_num(st.fit.slope) << " (threshold " << fmt_num(st.threshold)
            << "), fit residual " << fmt_num(st.fit.residual) << "  " << (st.pass ? "PASS" : "FAIL") << "\n";
  return st.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convint: transport defect construction toolkit"};
  app.require_subcommand(1);

  ParamsArgs pa;
  auto* sp = app.add_subcommand("params", "choose exponents and check the parameter conditions");
  sp->add_option("-d,--dim", pa.d, "dimension")->check(CLI::Range(2, 3));
  sp->add_option("-p,--p", pa.p, "integrability index")->check(CLI::PositiveNumber);
  sp->add_option("--alpha", pa.alpha, "override alpha (rational, e.g. 9/100)");
  sp->add_option("--gamma", pa.gamma, "override gamma");
  sp->add_option("--r", pa.r, "override r");
  sp->add_option("--lambda", pa.lambda, "lambda for the numeric evaluation");
  sp->add_option("--out", pa.out, "directory for params.csv (stdout if omitted)");
  add_config(sp, pa.config);

  BlocksArgs ba;
  auto* sb = app.add_subcommand("blocks", "building-block norms and property checks");
  sb->add_flag("--check", ba.check, "run the property suite and emit CSV");
  sb->add_option("-d,--dim", ba.d)->check(CLI::Range(2, 3));
  sb->add_option("--sigma", ba.sigma)->check(CLI::PositiveNumber);
  sb->add_option("--mu", ba.mu);
  sb->add_option("-n,--grid", ba.n, "minimum points per axis");
  sb->add_option("--out", ba.out, "directory for blocks.csv (stdout if omitted)");
  add_config(sb, ba.config);

  StepArgs sa;
  auto* ss = app.add_subcommand("step", "one perturbation step");
  ss->add_option("-d,--dim", sa.d)->check(CLI::Range(2, 3));
  ss->add_option("-p,--p", sa.p)->check(CLI::PositiveNumber);
  ss->add_option("--delta", sa.delta);
  ss->add_option("--mode", sa.mode, "identity or scaling");
  ss->add_option("--sigma", sa.sigma);
  ss->add_option("--mu", sa.mu);
  ss->add_option("--kappa", sa.kappa);
  ss->add_option("--lambda", sa.lambda0, "first rung of the lambda ladder");
  ss->add_option("--growth", sa.growth, "ladder growth factor");
  ss->add_option("--grid", sa.grid, "minimum points per axis");
  ss->add_option("--time", sa.time, "time of the written snapshots");
  ss->add_option("--target", sa.target, "single, two or zero");
  ss->add_option("--rho-profile", sa.rho_profile, "scalar snapshot F; the input triple is (eta F, 0, eta' R F)");
  ss->add_option("--operator", sa.op, "none, laplacian or bilaplacian");
  ss->add_option("--out", sa.out);
  add_config(ss, sa.config);

  IterateArgs ia;
  auto* si = app.add_subcommand("iterate", "the iteration with p_n = N 2^n, delta_n = eps 2^-n");
  si->add_option("-d,--dim", ia.d)->check(CLI::Range(2, 3));
  si->add_option("-N,--N", ia.N)->check(CLI::PositiveNumber);
  si->add_option("--eps", ia.eps);
  si->add_option("--n_max", ia.n_max);
  si->add_option("--mode", ia.mode);
  si->add_option("--lambda", ia.lambda0);
  si->add_option("--growth", ia.growth);
  si->add_option("--sigma", ia.sigma);
  si->add_option("--mu", ia.mu);
  si->add_option("--kappa", ia.kappa);
  si->add_option("--grid", ia.init_grid, "grid of the initial triple");
  si->add_option("--target", ia.target);
  si->add_option("--out", ia.out);
  add_config(si, ia.config);

  VerifyArgs va;
  auto* sv = app.add_subcommand("verify", "run a check suite");
  sv->add_option("--suite", va.suite, "trivial or acceptance");
  sv->add_option("--criterion", va.criteria, "acceptance criterion ids (default: all)");
  sv->add_option("--seed", va.seed);
  sv->add_option("--out", va.out);
  add_config(sv, va.config);

  ScalingArgs ca;
  auto* sc = app.add_subcommand("scaling", "log-log slope of an estimate against lambda");
  sc->add_option("-d,--dim", ca.d)->check(CLI::Range(2, 3));
  sc->add_option("-p,--p", ca.p)->check(CLI::PositiveNumber);
  sc->add_option("--quantity", ca.quantity);
  sc->add_option("--lambdas", ca.lambdas)->delimiter(',');
  sc->add_option("--target", ca.target);
  sc->add_option("--operator", ca.op);
  sc->add_option("--out", ca.out);
  add_config(sc, ca.config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sp) return apply_config(sp, pa.config), cmd_params(pa);
    if (*sb) return apply_config(sb, ba.config), cmd_blocks(ba);
    if (*ss) return apply_config(ss, sa.config), cmd_step(sa);
    if (*si) return apply_config(si, ia.config), cmd_iterate(ia);
    if (*sv) return apply_config(sv, va.config), cmd_verify(va);
    if (*sc) return apply_config(sc, ca.config), cmd_scaling(ca);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
