#include "convint/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "quad.hpp"

namespace ci {

namespace {

constexpr double kPi = std::numbers::pi;

double frac(double x) { return x - std::floor(x); }

}  // namespace

BumpProfile::BumpProfile() : w_(0.125, 0.875, 1.0), c_(1.0) {
  c_ = 1.0 / std::sqrt(raw_integral(0, 2.0, false));
  const double sq = integral_sq();
  if (std::abs(sq - 1.0) > 1e-12) throw std::logic_error("BumpProfile: normalization failed");
}

std::array<double, 4> BumpProfile::derivs(double t) const {
  std::array<double, 4> out{0, 0, 0, 0};
  if (t <= 0.125 || t >= 0.875) return out;
  const auto w = w_.derivs(t);
  const double om = 4.0 * kPi;
  const double s = std::sin(om * t), c = std::cos(om * t);
  const double S[4] = {s, om * c, -om * om * s, -om * om * om * c};
  out[0] = c_ * w[0] * S[0];
  out[1] = c_ * (w[1] * S[0] + w[0] * S[1]);
  out[2] = c_ * (w[2] * S[0] + 2.0 * w[1] * S[1] + w[0] * S[2]);
  out[3] = c_ * (w[3] * S[0] + 3.0 * w[2] * S[1] + 3.0 * w[1] * S[2] + w[0] * S[3]);
  return out;
}

double BumpProfile::raw_integral(int order, double q, bool absolute) const {
  auto fn = [this, order](double t) { return derivs(t)[order]; };
  if (!absolute) {
    auto g = [&](double t) { return std::pow(fn(t), q); };
    return quad::gauss_panels(g, 0.125, 0.875, 24);
  }
  return quad::abs_power_integral(fn, 0.125, 0.875, q);
}

double BumpProfile::integral() const {
  return quad::gauss_panels([this](double t) { return derivs(t)[0]; }, 0.125, 0.875, 24);
}

double BumpProfile::integral_sq() const { return raw_integral(0, 2.0, false); }

double BumpProfile::lq_norm(double q, int order) const {
  if (order < 0 || order > 3) throw std::out_of_range("BumpProfile: derivative order must be 0..3");
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find({q, order});
    if (it != memo_.end()) return it->second;
  }
  const double v = compute_lq(q, order);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  memo_[{q, order}] = v;
  return v;
}

double BumpProfile::compute_lq(double q, int order) const {
  if (std::isinf(q)) return sup_norm(order);
  if (q == 2.0) return std::sqrt(raw_integral(order, 2.0, false));
  return std::pow(raw_integral(order, q, true), 1.0 / q);
}

double BumpProfile::sup_norm(int order) const {
  const int n = 100000;
  double best = 0.0, tb = 0.5;
  for (int i = 0; i <= n; ++i) {
    double t = 0.125 + 0.75 * i / n;
    double v = std::abs(derivs(t)[order]);
    if (v > best) {
      best = v;
      tb = t;
    }
  }
  double lo = tb - 1e-5, hi = tb + 1e-5;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    if (std::abs(derivs(a)[order]) > std::abs(derivs(b)[order]))
      hi = b;
    else
      lo = a;
  }
  return std::max(best, std::abs(derivs(0.5 * (lo + hi))[order]));
}

double BumpProfile::cumulative_sq(double v) const {
  if (v <= 0.125) return 0.0;
  const double b = std::min(v, 0.875);
  auto g = [this](double t) {
    double x = derivs(t)[0];
    return x * x;
  };
  const double len = b - 0.125;
  const int panels = std::max(1, static_cast<int>(std::ceil(len / 0.75 * 12)));
  return quad::gauss_panels(g, 0.125, b, panels);
}

const BumpProfile& make_bump_profile() {
  static const BumpProfile profile;
  return profile;
}

TimeScales TimeScales::make(int d, double kappa, double sigma, double alpha) {
  return {d, kappa, std::log(kappa), sigma, alpha, std::log(sigma)};
}

TimeScales TimeScales::from_log(int d, double log_kappa, double sigma, double alpha) {
  const double k = log_kappa < 700.0 ? std::exp(log_kappa) : std::numeric_limits<double>::infinity();
  return {d, k, log_kappa, sigma, alpha, std::log(sigma)};
}

TimeScales TimeScales::from_logs(int d, double log_kappa, double log_sigma, double alpha) {
  TimeScales ts = from_log(d, log_kappa, log_sigma < 700.0 ? std::exp(log_sigma) : std::numeric_limits<double>::infinity(), alpha);
  ts.log_sigma = log_sigma;
  return ts;
}

TemporalProfile::TemporalProfile(ProfileKind kind, int k, const TimeScales& ts) : kind_(kind), k_(k), ts_(ts) {
  if (k < 0 || k >= ts.d) throw std::out_of_range("TemporalProfile: direction index out of range");
  if (ts.log_kappa < std::log(static_cast<double>(ts.d)) - 1e-12)
    throw std::invalid_argument("TemporalProfile: kappa must be at least d for disjoint bumps");
  if (!(ts.sigma >= 1.0)) throw std::invalid_argument("TemporalProfile: sigma must be >= 1");
  tk_ = static_cast<double>(k) / ts.d;
}

double TemporalProfile::Gk(double s, int order) const {
  const double v = ts_.kappa * frac(s - tk_);
  if (v >= 1.0) return 0.0;
  return make_bump_profile().derivs(v)[order];
}

double TemporalProfile::eval(double t, int order) const {
  if (order < 0 || order > 2) throw std::out_of_range("TemporalProfile: time derivative order must be 0..2");
  if (!std::isfinite(ts_.kappa)) throw std::overflow_error("TemporalProfile: kappa not representable for pointwise use");
  const double kap = ts_.kappa, sig = ts_.sigma, a = ts_.alpha;
  const double s = sig * t;
  const double ks = kap * sig;
  switch (kind_) {
    case ProfileKind::g_tilde:
    case ProfileKind::g_small: {
      const double amp = kind_ == ProfileKind::g_tilde ? std::pow(kap, a) : std::pow(kap, 1.0 - a);
      return amp * std::pow(ks, order) * Gk(s, order);
    }
    case ProfileKind::product: {
      const double g0 = Gk(s, 0);
      if (order == 0) return kap * g0 * g0;
      const double g1 = Gk(s, 1);
      if (order == 1) return kap * 2.0 * g0 * g1 * ks;
      return kap * 2.0 * (g1 * g1 + g0 * Gk(s, 2)) * ks * ks;
    }
    case ProfileKind::h_corrector: {
      if (order == 0) {
        const double u = frac(s);
        const double v = std::clamp(kap * (u - tk_), 0.0, 1.0);
        return make_bump_profile().cumulative_sq(v) - u;
      }
      const double g0 = Gk(s, 0);
      if (order == 1) return sig * (kap * g0 * g0 - 1.0);
      return sig * kap * 2.0 * g0 * Gk(s, 1) * ks;
    }
  }
  return 0.0;
}

double TemporalProfile::h_lq_q(double q) const {
  const double ik = std::exp(-ts_.log_kappa);
  const double a = tk_, b = tk_ + ik;
  double acc = std::pow(a, q + 1.0) / (q + 1.0) + std::pow(1.0 - b, q + 1.0) / (q + 1.0);
  if (ik > 1e-300) {
    const auto& G = make_bump_profile();
    auto fn = [&](double v) { return G.cumulative_sq(v) - tk_ - v * ik; };
    acc += ik * quad::abs_power_integral(fn, 0.0, 1.0, q);
  }
  return acc;
}

double TemporalProfile::log_lq_norm(double q, int order) const {
  const auto& G = make_bump_profile();
  const double lk = ts_.log_kappa, ls = ts_.log_sigma, a = ts_.alpha;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  if (order < 0 || order > 1) throw std::out_of_range("TemporalProfile: norm order must be 0 or 1");
  switch (kind_) {
    case ProfileKind::g_tilde:
    case ProfileKind::g_small: {
      const double amp = kind_ == ProfileKind::g_tilde ? a : 1.0 - a;
      return amp * lk + order * (lk + ls) - iq * lk + std::log(G.lq_norm(q, order));
    }
    case ProfileKind::product: {
      if (order == 1) {
        // d/dv G~^2 = 2 G~ G~'
        auto fn = [&G](double v) {
          auto g = G.derivs(v);
          return 2.0 * g[0] * g[1];
        };
        double base;
        if (std::isinf(q)) {
          base = 0.0;
          for (int i = 0; i <= 100000; ++i) base = std::max(base, std::abs(fn(0.125 + 0.75 * i / 100000)));
        } else {
          base = std::pow(quad::abs_power_integral(fn, 0.125, 0.875, q), 1.0 / q);
        }
        return lk + lk + ls - iq * lk + std::log(base);
      }
      const double base = std::isinf(q) ? std::pow(G.lq_norm(std::numeric_limits<double>::infinity()), 2) : std::pow(G.lq_norm(2.0 * q), 2);
      return lk - iq * lk + std::log(base);
    }
    case ProfileKind::h_corrector: {
      if (order == 1) throw std::invalid_argument("TemporalProfile: h_k derivative norm not provided");
      if (std::isinf(q)) return std::log(sup_norm());
      return std::log(h_lq_q(q)) / q;
    }
  }
  return 0.0;
}

double TemporalProfile::lq_norm(double q, int order) const { return std::exp(log_lq_norm(q, order)); }

double TemporalProfile::log_sup_norm() const {
  const auto& G = make_bump_profile();
  const double lk = ts_.log_kappa, a = ts_.alpha;
  switch (kind_) {
    case ProfileKind::g_tilde:
      return a * lk + std::log(G.lq_norm(std::numeric_limits<double>::infinity()));
    case ProfileKind::g_small:
      return (1.0 - a) * lk + std::log(G.lq_norm(std::numeric_limits<double>::infinity()));
    case ProfileKind::product:
      return lk + 2.0 * std::log(G.lq_norm(std::numeric_limits<double>::infinity()));
    case ProfileKind::h_corrector:
      return std::log(sup_norm());
  }
  return 0.0;
}

double TemporalProfile::sup_norm() const {
  if (kind_ != ProfileKind::h_corrector) return std::exp(log_sup_norm());
  // |H(u)| is maximal at the ends of the linear pieces or inside the bump window
  const double ik = std::exp(-ts_.log_kappa);
  double m = std::max(tk_, 1.0 - tk_ - ik);
  if (ik > 1e-300) {
    const auto& G = make_bump_profile();
    for (int i = 0; i <= 2000; ++i) {
      const double v = i / 2000.0;
      m = std::max(m, std::abs(G.cumulative_sq(v) - tk_ - v * ik));
    }
  }
  return m;
}

std::vector<std::pair<double, double>> TemporalProfile::bump_intervals() const {
  std::vector<std::pair<double, double>> out;
  const double ik = std::exp(-ts_.log_kappa);
  const int periods = static_cast<int>(std::llround(ts_.sigma));
  for (int j = 0; j < periods; ++j) {
    const double lo = (j + tk_ + 0.125 * ik) / ts_.sigma;
    const double hi = (j + tk_ + 0.875 * ik) / ts_.sigma;
    out.emplace_back(lo, hi);
  }
  return out;
}

double TemporalProfile::bump_center(int j) const {
  const double ik = std::exp(-ts_.log_kappa);
  return (j + tk_ + 0.5 * ik) / ts_.sigma;
}

std::pair<TemporalProfile, TemporalProfile> g_profiles(int k, const TimeScales& ts) {
  return {TemporalProfile(ProfileKind::g_tilde, k, ts), TemporalProfile(ProfileKind::g_small, k, ts)};
}

TemporalProfile h_corrector(int k, const TimeScales& ts) { return TemporalProfile(ProfileKind::h_corrector, k, ts); }

void dump_profile_csv(std::ostream& os, const TemporalProfile& p, const std::vector<double>& ts) {
  os << "t,value,derivative\n";
  os.precision(17);
  for (double t : ts) os << t << ',' << p(t) << ',' << p.dt(t) << '\n';
}

}  // namespace ci
