#include "convint/params.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace ci {

namespace {

// largest multiple of 1/10^k strictly below x, refining k until the result is positive
Rational grid_below(const Rational& x, int k0) {
  for (std::int64_t scale = 1, k = 0; k < 12; ++k, scale *= 10) {
    if (k < k0) continue;
    const Rational scaled = x * Rational(scale);
    std::int64_t m = scaled.floor();
    if (Rational(m) == scaled) --m;
    if (m > 0) return Rational(m, scale);
  }
  throw ParameterError("choose_exponents: bound too small to represent");
}

Rational grid_floor(const Rational& x, std::int64_t scale) { return Rational((x * Rational(scale)).floor(), scale); }

}  // namespace

Rational condition_theta_p(const Exponents& ex) {
  const Rational one(1), two(2), p(ex.p), d(ex.d);
  const Rational dg = d - two * ex.gamma;
  return p * (one + two * ex.gamma) + (ex.alpha - one / p) * dg / ex.alpha;
}

Rational condition_w(const Exponents& ex) {
  const Rational one(1), two(2), p(ex.p), d(ex.d);
  return -(d - two * ex.gamma) + (one + two * ex.gamma) + (d - one) * (one - one / p);
}

Rational condition_acceleration(const Exponents& ex) {
  const Rational one(1), two(2), d(ex.d);
  return (d - two * ex.gamma) - one - (d - one) / ex.r;
}

Exponents choose_exponents(int d, int p) {
  if (d < 2) throw ParameterError("choose_exponents: need d >= 2");
  if (p < 1) throw ParameterError("choose_exponents: need p >= 1");
  Exponents ex;
  ex.d = d;
  ex.p = p;
  const Rational one(1), D(d), P(p);
  ex.gamma = min(Rational(1, 5), (D - one) / (Rational(5) * P));

  const Rational alpha_bound = (D - Rational(1, 2)) / (Rational(2) * P * P + Rational(2) * D * P);
  ex.alpha = grid_below(alpha_bound, 2);
  // the recipe is sufficient; guard anyway
  while (condition_theta_p(ex) > -ex.gamma) ex.alpha = grid_below(ex.alpha, 2);

  const Rational r_bound = (D - one) / (D - one - ex.gamma);
  Rational r = grid_floor(one + (r_bound - one) / Rational(2), 100);
  if (r <= one) r = one + (r_bound - one) / Rational(2);
  ex.r = r;
  while (condition_acceleration(ex) > -ex.gamma) ex.r = one + (ex.r - one) / Rational(2);
  return ex;
}

bool ConditionReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass_exact || !r.pass_numeric) return false;
  return !rows.empty();
}

namespace {

ConditionReport conditions_at(const Exponents& ex, double ll) {
  if (!(ll > 0.0)) throw ParameterError("check_conditions: need lambda > 1");
  ConditionReport rep;
  auto add = [&](const char* id, const char* label, const Rational& lhs) {
    ConditionRow row;
    row.id = id;
    row.label = label;
    row.lhs = lhs;
    row.rhs = -ex.gamma;
    row.pass_exact = lhs <= row.rhs;
    row.log_lhs = lhs.to_double() * ll;
    row.log_rhs = row.rhs.to_double() * ll;
    row.pass_numeric = row.log_lhs <= row.log_rhs + 1e-12 * (1.0 + std::abs(row.log_rhs));
    rep.rows.push_back(row);
  };
  add("theta_p_LpCp", "theta_p in L^p_t C^p", condition_theta_p(ex));
  add("w_L1W1p", "w in L^1_t W^{1,p}", condition_w(ex));
  add("acceleration", "acceleration error", condition_acceleration(ex));
  return rep;
}

}  // namespace

ConditionReport check_conditions(const Exponents& ex, double lambda) {
  if (!(lambda > 1.0)) throw ParameterError("check_conditions: need lambda > 1");
  return conditions_at(ex, std::log(lambda));
}

ConditionReport check_conditions(const ParameterSet& ps) {
  return conditions_at(ps.ex, ps.log_lambda > 0.0 ? ps.log_lambda : std::log(2.0));
}

ParameterSet realize_log(const Exponents& ex, double log_lambda, const RealizeOptions& opt) {
  if (!(log_lambda > 0.0)) throw ParameterError("realize: need lambda > 1");
  const double g = ex.gamma.to_double(), a = ex.alpha.to_double();
  if (!(g > 0.0 && g < 0.25) || !(a > 0.0) || !(ex.r > Rational(1)))
    throw ParameterError("realize: exponents outside 0 < gamma < 1/4, alpha > 0, r > 1");
  ParameterSet ps;
  ps.ex = ex;
  ps.mode = Mode::scaling;

  double ls = 2.0 * g * log_lambda;
  if (opt.exact_sigma) {
    const double s = std::max(1.0, std::round(std::exp(ls)));
    ls = std::log(s);
    log_lambda = ls / (2.0 * g);
    if (!(log_lambda > 0.0)) throw ParameterError("realize: exact-sigma adjustment gives lambda <= 1");
  }
  ps.log_lambda = log_lambda;
  ps.lambda = std::exp(log_lambda);
  if (ls < 40.0) {
    const double s = std::ceil(std::exp(ls) * (1.0 - 1e-14));
    ps.sigma = static_cast<std::int64_t>(std::max(1.0, s));
    ps.log_sigma = std::log(static_cast<double>(ps.sigma));
  } else {
    ps.sigma = std::numeric_limits<std::int64_t>::max();
    ps.log_sigma = ls;
    ps.warnings.push_back("sigma exceeds 64-bit range; only its logarithm is meaningful");
  }
  ps.mu = ps.lambda;
  ps.log_mu = log_lambda;
  ps.log_kappa = (ex.d - 2.0 * g) / a * log_lambda;
  ps.kappa = ps.log_kappa < 700.0 ? std::exp(ps.log_kappa) : std::numeric_limits<double>::infinity();
  if (ps.log_kappa < std::log(static_cast<double>(ex.d)))
    throw ParameterError("realize: kappa = " + std::to_string(ps.kappa) + " < d; raise lambda");
  if (ps.log_kappa > std::log(opt.kappa_warn)) {
    std::ostringstream os;
    os << "kappa = " << std::setprecision(4) << ps.kappa << " exceeds " << opt.kappa_warn
       << "; full-field evaluation is not representable, use scaling mode";
    ps.warnings.push_back(os.str());
  }
  return ps;
}

ParameterSet realize(const Exponents& ex, double lambda, const RealizeOptions& opt) {
  if (!(lambda > 1.0)) throw ParameterError("realize: need lambda > 1");
  return realize_log(ex, std::log(lambda), opt);
}

ParameterSet realize_override(const Exponents& ex, std::int64_t sigma, double mu, double kappa) {
  if (sigma < 1) throw ParameterError("realize_override: sigma must be a positive integer");
  if (!(mu >= 1.0)) throw ParameterError("realize_override: mu must be >= 1");
  if (!(kappa >= ex.d)) throw ParameterError("realize_override: kappa must be >= d");
  ParameterSet ps;
  ps.ex = ex;
  ps.mode = Mode::identity_check;
  ps.lambda = mu;
  ps.log_lambda = std::log(mu);
  ps.sigma = sigma;
  ps.log_sigma = std::log(static_cast<double>(sigma));
  ps.mu = mu;
  ps.log_mu = std::log(mu);
  ps.kappa = kappa;
  ps.log_kappa = std::log(kappa);
  return ps;
}

void write_condition_text(std::ostream& os, const Exponents& ex, const ConditionReport& rep) {
  os << "d = " << ex.d << "  p = " << ex.p << "\n";
  os << "alpha = " << ex.alpha << " (" << ex.alpha.to_double() << ")  gamma = " << ex.gamma << " ("
     << ex.gamma.to_double() << ")  r = " << ex.r << " (" << ex.r.to_double() << ")\n";
  os << std::left << std::setw(14) << "condition" << std::setw(24) << "label" << std::setw(14) << "exponent"
     << std::setw(10) << "bound" << "result\n";
  for (const auto& r : rep.rows) {
    std::ostringstream e;
    e << std::setprecision(6) << r.lhs.to_double();
    os << std::setw(14) << r.id << std::setw(24) << r.label << std::setw(14) << e.str() << std::setw(10)
       << r.rhs.to_double() << (r.pass_exact && r.pass_numeric ? "pass" : "FAIL") << "\n";
  }
}

void write_condition_csv(std::ostream& os, const ConditionReport& rep) {
  os << "id,exponent_exact,exponent,bound_exact,bound,pass_exact,log_lhs,log_rhs,pass_numeric\n";
  os << std::setprecision(12);
  for (const auto& r : rep.rows)
    os << r.id << ',' << r.lhs << ',' << r.lhs.to_double() << ',' << r.rhs << ',' << r.rhs.to_double() << ','
       << (r.pass_exact ? "true" : "false") << ',' << r.log_lhs << ',' << r.log_rhs << ','
       << (r.pass_numeric ? "true" : "false") << '\n';
}

}  // namespace ci
