#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "convint/rational.hpp"

namespace ci {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Exponents {
  int d = 2;
  int p = 1;
  Rational alpha;
  Rational gamma;
  Rational r;
};

enum class Mode { identity_check, scaling };

// (d, p, alpha, gamma, r, lambda, sigma, mu, kappa). Large lambda/kappa are carried as logarithms;
// kappa is +inf when it does not fit a double.
struct ParameterSet {
  Exponents ex;
  Mode mode = Mode::scaling;
  double lambda = 2.0;
  double log_lambda = 0.0;
  std::int64_t sigma = 1;
  double log_sigma = 0.0;
  double mu = 2.0;
  double log_mu = 0.0;
  double kappa = 1.0;
  double log_kappa = 0.0;
  std::vector<std::string> warnings;

  int d() const { return ex.d; }
  int p() const { return ex.p; }
  double alpha() const { return ex.alpha.to_double(); }
  double gamma() const { return ex.gamma.to_double(); }
  double r() const { return ex.r.to_double(); }
};

// follows the feasibility recipe: gamma = min(1/5, (d-1)/(5p)); alpha is the largest multiple of
// 1/100 (1/1000, ... if needed) strictly below (d - 1/2)/(2p^2 + 2dp); r halfway to (d-1)/(d-1-gamma),
// rounded down to a multiple of 1/100
Exponents choose_exponents(int d, int p);

struct ConditionRow {
  std::string id;
  std::string label;
  Rational lhs;  // exponent of lambda on the left
  Rational rhs;  // -gamma
  bool pass_exact = false;
  // ln(lambda^lhs) and ln(lambda^rhs) at the realized lambda
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  bool pass_numeric = false;
};

struct ConditionReport {
  std::vector<ConditionRow> rows;
  bool all_pass() const;
};

// exponent-level conditions on (alpha, gamma, r), plus a numeric evaluation at lambda
ConditionReport check_conditions(const Exponents& ex, double lambda = 2.0);
ConditionReport check_conditions(const ParameterSet& ps);

Rational condition_theta_p(const Exponents& ex);
Rational condition_w(const Exponents& ex);
Rational condition_acceleration(const Exponents& ex);

struct RealizeOptions {
  // move lambda to the nearest value with lambda^(2 gamma) an integer
  bool exact_sigma = false;
  double kappa_warn = 1e12;
};

// sigma = ceil(lambda^(2 gamma)), mu = lambda, kappa = lambda^((d - 2 gamma)/alpha)
ParameterSet realize(const Exponents& ex, double lambda, const RealizeOptions& opt = {});
ParameterSet realize_log(const Exponents& ex, double log_lambda, const RealizeOptions& opt = {});
// identity-check mode: (sigma, mu, kappa) chosen freely, kappa >= d
ParameterSet realize_override(const Exponents& ex, std::int64_t sigma, double mu, double kappa);

void write_condition_text(std::ostream& os, const Exponents& ex, const ConditionReport& rep);
void write_condition_csv(std::ostream& os, const ConditionReport& rep);

}  // namespace ci
