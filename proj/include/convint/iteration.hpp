#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "convint/bump.hpp"
#include "convint/defect.hpp"
#include "convint/mikado.hpp"
#include "convint/params.hpp"
#include "convint/scaling.hpp"

namespace ci {

// amplitude * eta(t) * F(x) with eta a smooth bump
struct TargetTerm {
  SmoothBump eta{0.1, 0.9, 1.0};
  double amplitude = 1.0;
  std::function<double(const Point&)> space;
  std::string label;
};

// closed-form target density, mean-zero in x at every t, temporal support inside (0,1)
struct TargetDensity {
  int d = 2;
  std::vector<TargetTerm> terms;

  std::pair<double, double> support() const;
  bool empty() const { return terms.empty(); }
  ScalarTimeField on(const Grid& g) const;

  // eta(t) sin(2 pi x_1), eta a bump on (0.1, 0.9)
  static TargetDensity single_mode(int d);
  // eta(t) (sin(2 pi x_1) + cos(4 pi x_2))
  static TargetDensity two_mode(int d);
  static TargetDensity zero(int d);
};

// throws std::invalid_argument on a non-zero mean or a support touching 0 or 1
void validate_target(const TargetDensity& target, const Grid& g);

// (rho~, 0, R d_t rho~); closed form since the time factors are scalar
DefectTriple init_triple(const TargetDensity& target, const Grid& g);
FieldBounds init_bounds(const TargetDensity& target, int n = 64);

struct StepConfig {
  int p = 2;
  double delta = 0.25;
  Mode mode = Mode::scaling;
  // lambda ladder: lambda_j = lambda0 * growth^j, j < max_tries
  double lambda0 = 16.0;
  double growth = 2.0;
  long long max_tries = 1LL << 40;
  // identity-check parameters
  std::int64_t sigma = 2;
  double mu = 8.0;
  double kappa = 8.0;
  int min_grid = 16;
  std::optional<DiffOperator> L;

  void validate() const;
};

struct ScalingStepResult {
  ParameterSet ps;
  ScalingEstimate est;
  long long rung = 0;
  long long evaluations = 0;
  bool accepted = false;
  std::vector<std::string> failing;  // targets missed at the reported rung
};

// smallest ladder rung meeting theta, w, R1 <= delta and the parameter conditions.
// Rungs are probed at 0, 1, 2, 4, ... and the first passing bracket is bisected.
ScalingStepResult scaling_step(const FieldBounds& in, const StepConfig& cfg, const SpatialProfile& profile);

struct FieldStepResult {
  ParameterSet ps;
  std::shared_ptr<const MikadoSet> blocks;
  std::shared_ptr<const Perturbation> P;
  std::shared_ptr<const DefectParts> parts;
  DefectTriple out;
};

// identity-check step on the grid sized for (sigma, mu) (or grid_n if larger)
FieldStepResult field_step(const DefectTriple& in, const StepConfig& cfg,
                           std::shared_ptr<const SpatialProfile> profile, int grid_n = 0);

struct RunConfig {
  TargetDensity target = TargetDensity::single_mode(2);
  double eps = 0.5;
  int N = 1;
  int n_max = 2;
  Mode mode = Mode::scaling;
  StepConfig base;  // ladder and identity-check parameters; p and delta follow the schedule
  // identity-check mode: (sigma, mu, kappa) per step; the last entry repeats
  std::vector<std::array<double, 3>> field_params{{1, 2, 8}};
  int init_grid = 64;

  // p_n = N 2^n, delta_n = eps 2^-n for n = 1, ..., n_max
  int p_at(int n) const;
  double delta_at(int n) const;
};

struct StepRecord {
  int n = 0;
  int p = 0;
  double delta = 0.0;
  ParameterSet ps;
  bool accepted = false;
  double theta_norm = 0.0;  // L^{p_n}_t C^{p_n}
  double w_norm = 0.0;      // L^1_t W^{1,p_n}
  double R1_L1 = 0.0;
  double theta_L1 = 0.0;    // L^1_{t,x}
  double products_L1 = 0.0;
  double M_ratio = 0.0;
  std::map<std::string, double> parts_L1;
  int grid_n = 0;
};

struct RunResult {
  std::vector<StepRecord> history;
  bool accepted = true;
  // running bound on ||rho_n - rho~||_{L^N_t C^N} (sum of theta norms)
  double cumulative = 0.0;
  FieldBounds final_bounds;
  // identity-check mode only
  std::optional<DefectTriple> final_triple;
  std::vector<std::shared_ptr<const Perturbation>> perturbations;
};

RunResult run(const RunConfig& cfg);

// smooth test functions phi(x, t) = chi(t) * trig(x); chi a bump on (0.05, 0.95)
struct TestFunction {
  std::array<int, 3> k{0, 0, 0};
  bool cosine = true;
  double tlo = 0.05, thi = 0.95;
  double value(const Point& x, double t) const;
  // returns (phi, d_t phi, grad phi) on g at time t
  void sample(const Grid& g, double t, PeriodicField& phi, PeriodicField& dt, VectorField& grad) const;
  double grad_sup() const;
};
std::vector<TestFunction> test_basis(int d, int count = 20);

struct WeakFormRow {
  TestFunction phi;
  double pairing = 0.0;  // int int rho (d_t phi + u . grad phi)
  double defect = 0.0;   // int int R . grad phi
  // independent bound on |pairing - defect|: int ||strong residual||_{L^1} sup|phi| dt plus the
  // quadrature error of int d/dt(rho phi) = 0
  double disc = 0.0;
  double tol = 0.0;  // R_L1_bound * ||grad phi||_inf + disc
  bool pass = false;  // |pairing - defect| <= disc
};

struct WeakFormReport {
  std::vector<WeakFormRow> rows;
  double R_L1_bound = 0.0;  // scaling-mode bound on the final ||R_n||_{L^1}
  double R_L1_field = 0.0;  // measured on the identity-check triple
  double tol_weak = 0.0;    // max over rows
  double rho_tilde_L1 = 0.0;
  double theta_L1_sum = 0.0;
  // lower bound on int_0^1 ||rho(t)||_{L^1} dt, hence on ||rho(t)||_{L^1} at some t
  double rho_lower = 0.0;
  bool pairing_pass = false;
  bool witness_pass = false;
};

// Gauss nodes on panels split at the bump intervals of every recorded step, each panel cut again
// into equal pieces
std::vector<std::pair<double, double>> time_quadrature(const RunResult& res, double t_lo, double t_hi,
                                                       int per_panel = 16, int subdivisions = 4);

// pairing rows from the identity-check run, tolerance and witness from the scaling run
WeakFormReport weak_form_check(const RunResult& field, const RunResult& scaling, const TargetDensity& target,
                               int count = 20, int quad_nodes = 16, int quad_subdivisions = 4);

}  // namespace ci
