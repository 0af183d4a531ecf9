#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "convint/bump.hpp"

namespace ci {

// G~(t) = c w(t) sin(4 pi t), w a smooth bump on (1/8, 7/8), c fixed by int G~^2 = 1
class BumpProfile {
public:
  BumpProfile();

  double operator()(double t) const { return derivs(t)[0]; }
  // value and first three derivatives
  std::array<double, 4> derivs(double t) const;

  double normalization() const { return c_; }
  double support_lo() const { return 0.125; }
  double support_hi() const { return 0.875; }

  double integral() const;
  double integral_sq() const;
  // (int |G~^(order)|^q)^(1/q) over (0,1)
  double lq_norm(double q, int order = 0) const;
  double sup_norm(int order = 0) const;
  // E(v) = int_0^v G~^2
  double cumulative_sq(double v) const;

private:
  double raw_integral(int order, double q, bool absolute) const;
  double compute_lq(double q, int order) const;
  SmoothBump w_;
  double c_ = 1.0;
  mutable std::mutex memo_mutex_;
  mutable std::map<std::pair<double, int>, double> memo_;
};

const BumpProfile& make_bump_profile();

struct TimeScales {
  int d = 2;
  double kappa = 8.0;
  double log_kappa = 0.0;  // ln kappa; authoritative when kappa overflows
  double sigma = 1.0;
  double alpha = 0.09;
  double log_sigma = 0.0;  // authoritative when sigma overflows

  static TimeScales make(int d, double kappa, double sigma, double alpha);
  static TimeScales from_log(int d, double log_kappa, double sigma, double alpha);
  static TimeScales from_logs(int d, double log_kappa, double log_sigma, double alpha);
};

enum class ProfileKind { g_tilde, g_small, product, h_corrector };

// One of g~_k, g_k, g~_k g_k, h_k for direction k (0-based), offset t_k = k/d
class TemporalProfile {
public:
  TemporalProfile(ProfileKind kind, int k, const TimeScales& ts);

  ProfileKind kind() const { return kind_; }
  int k() const { return k_; }
  const TimeScales& scales() const { return ts_; }
  double offset() const { return tk_; }

  double operator()(double t) const { return eval(t, 0); }
  double dt(double t) const { return eval(t, 1); }
  double dt2(double t) const { return eval(t, 2); }
  double eval(double t, int order) const;

  // exact L^q[0,1] norm of the profile (order 0) or of its time derivative (order 1)
  double lq_norm(double q, int order = 0) const;
  double log_lq_norm(double q, int order = 0) const;
  double sup_norm() const;
  double log_sup_norm() const;

  // closed intervals carrying the bumps of G_k(sigma t) inside [0,1]
  std::vector<std::pair<double, double>> bump_intervals() const;
  // t at the centre of the j-th bump
  double bump_center(int j) const;

private:
  double Gk(double s, int order) const;
  double h_lq_q(double q) const;
  ProfileKind kind_;
  int k_;
  TimeScales ts_;
  double tk_;
};

std::pair<TemporalProfile, TemporalProfile> g_profiles(int k, const TimeScales& ts);
TemporalProfile h_corrector(int k, const TimeScales& ts);

// CSV rows "t,value,derivative"
void dump_profile_csv(std::ostream& os, const TemporalProfile& p, const std::vector<double>& ts);

}  // namespace ci
