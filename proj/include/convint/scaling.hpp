#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "convint/mikado.hpp"
#include "convint/params.hpp"

namespace ci {

struct DiffOperator;

// Norm bounds of a triple (rho, u, R), all as natural logarithms (-inf encodes zero).
// Derivatives obey Bernstein-type bounds: ||d_t^a d_x^j R||_inf <= sup_R * freq_t^a * freq_x^j.
struct FieldBounds {
  static constexpr double kZero = -std::numeric_limits<double>::infinity();
  double log_sup_R = kZero;
  double log_L1_R = kZero;
  double log_freq_x = 0.0;
  double log_freq_t = 0.0;
  double log_sup_rho = kZero;
  double log_sup_u = kZero;

  bool zero_R() const;
};

// Analytic estimate chain for one perturbation step; every implicit constant is 1.
// Keys: theta_p, theta_o, theta (L^p_t C^p), w (L^1_t W^{1,p}), R_osc_x, R_osc_t, R_acc, R_lin, R_cor,
// R_L (if requested), R1 (all L^1_{t,x}), theta_L1, w_L1, products_L1 and M_ratio.
struct ScalingEstimate {
  ParameterSet ps;
  std::map<std::string, double> log_norm;
  FieldBounds out;

  double value(const std::string& key) const;
};

ScalingEstimate estimate_step(const FieldBounds& in, const ParameterSet& ps, const SpatialProfile& profile,
                              const DiffOperator* L = nullptr);

// ||P_{!=0}(Phi_k W_k)|| pieces in d = 2: the rescaled antiderivative of mu phi(mu y)^2 - 1
double osc_antiderivative_l1(const SpatialProfile& profile, double log_mu);

// max_{1<=j<=jmax} (D_j / D_0)^{1/j} with D_j the sup of the order-j derivatives
double profile_frequency(const SpatialProfile& profile, int jmax = 8);
double bump_frequency();

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log y - fit|
};
LogLogFit fit_loglog(const std::vector<double>& log_x, const std::vector<double>& log_y);

struct ScalingStudy {
  std::string quantity;
  std::vector<double> lambdas;
  std::vector<double> log_values;
  LogLogFit fit;
  double threshold = 0.0;  // slope must not exceed this
  bool pass = false;
};

// slope of log(norm) against log(lambda); pass iff slope <= -gamma + 0.05 and residual <= 0.1
ScalingStudy scaling_study(const std::string& quantity, const std::vector<double>& lambdas, const Exponents& ex,
                           const FieldBounds& in, const SpatialProfile& profile, const DiffOperator* L = nullptr);

}  // namespace ci
