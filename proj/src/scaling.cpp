#include "convint/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "convint/defect.hpp"
#include "convint/temporal.hpp"
#include "quad.hpp"

namespace ci {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse(std::initializer_list<double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double lse_vec(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// E2(y) = int_0^min(y,1) phi^2 for the one-variable profile, tabulated with Hermite interpolation
class SquareAntiderivative {
public:
  explicit SquareAntiderivative(const SpatialProfile& prof) : prof_(prof), v_(kCells + 1, 0.0) {
    auto sq = [&](double y) {
      const double p = phi(y);
      return p * p;
    };
    for (int i = 0; i < kCells; ++i)
      v_[i + 1] = v_[i] + quad::gauss_panels(sq, static_cast<double>(i) / kCells, static_cast<double>(i + 1) / kCells, 1);
  }

  double phi(double y) const { return prof_.phi(&y); }

  double operator()(double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return v_.back();
    const double s = y * kCells;
    const int i = std::min(kCells - 1, static_cast<int>(s));
    const double h = 1.0 / kCells, u = s - i;
    const double y0 = static_cast<double>(i) / kCells, y1 = static_cast<double>(i + 1) / kCells;
    const double p0 = phi(y0), p1 = phi(y1);
    const double d0 = p0 * p0 * h, d1 = p1 * p1 * h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u), h01 = u * u * (3 - 2 * u),
                 h11 = u * u * (u - 1);
    return h00 * v_[i] + h10 * d0 + h01 * v_[i + 1] + h11 * d1;
  }

private:
  static constexpr int kCells = 20000;
  const SpatialProfile& prof_;
  std::vector<double> v_;
};

std::mutex g_table_mutex;
std::map<const SpatialProfile*, std::shared_ptr<SquareAntiderivative>> g_tables;

std::shared_ptr<SquareAntiderivative> square_table(const SpatialProfile& prof) {
  std::lock_guard<std::mutex> lock(g_table_mutex);
  auto& slot = g_tables[&prof];
  if (!slot) slot = std::make_shared<SquareAntiderivative>(prof);
  return slot;
}

// int_a^b |z0 - z| dz
double abs_linear(double a, double b, double z0) {
  if (b <= a) return 0.0;
  auto F = [z0](double z) { return 0.5 * (z - z0) * std::abs(z - z0); };
  return F(b) - F(a);
}

}  // namespace

bool FieldBounds::zero_R() const { return log_sup_R == kZero; }

double ScalingEstimate::value(const std::string& key) const {
  auto it = log_norm.find(key);
  if (it == log_norm.end()) throw std::out_of_range("ScalingEstimate: no quantity '" + key + "'");
  return std::exp(it->second);
}

double osc_antiderivative_l1(const SpatialProfile& profile, double log_mu) {
  if (profile.d() != 2) return 1.0;
  auto E2 = square_table(profile);
  const double imu = log_mu > 700.0 ? 0.0 : std::exp(-log_mu);
  // Psi(z) = E2(mu z) - z - c on the unit period, c its mean
  const double intE2 = quad::gauss_panels([&](double y) { return (*E2)(y); }, 0.0, 1.0, 64);
  const double c = imu * intE2 + (1.0 - imu) - 0.5;
  double inner = 0.0;
  if (imu > 0.0) inner = imu * quad::abs_power_integral([&](double y) { return (*E2)(y) - y * imu - c; }, 0.0, 1.0, 1.0);
  return inner + abs_linear(imu, 1.0, 1.0 - c);
}

double profile_frequency(const SpatialProfile& profile, int jmax) {
  const double d0 = profile.phi_deriv_sup(0);
  double nu = 0.0;
  for (int j = 1; j <= jmax; ++j) nu = std::max(nu, std::pow(profile.phi_deriv_sup(j) / d0, 1.0 / j));
  return nu;
}

double bump_frequency() {
  const auto& G = make_bump_profile();
  const double g0 = G.sup_norm(0);
  double nu = 0.0;
  for (int j = 1; j <= 3; ++j) nu = std::max(nu, std::pow(G.sup_norm(j) / g0, 1.0 / j));
  return nu;
}

ScalingEstimate estimate_step(const FieldBounds& in, const ParameterSet& ps, const SpatialProfile& prof,
                              const DiffOperator* L) {
  if (prof.d() != ps.d()) throw std::invalid_argument("estimate_step: profile dimension mismatch");
  ScalingEstimate est;
  est.ps = ps;
  auto& n = est.log_norm;
  const int d = ps.d(), p = ps.p();
  const double ld = std::log(static_cast<double>(d)), l2 = std::log(2.0);
  const double ls = ps.log_sigma, lm = ps.log_mu, lk = ps.log_kappa, a = ps.alpha(), r = ps.r();
  const double pp = static_cast<double>(p);

  if (in.zero_R()) {
    for (const char* key : {"theta_p", "theta_o", "theta", "w", "R_osc_x", "R_osc_t", "R_acc", "R_lin", "R_cor", "R1",
                            "theta_L1", "w_L1", "products_L1"})
      n[key] = kNegInf;
    if (L) n["R_L"] = kNegInf;
    n["M_ratio"] = kNegInf;
    est.out = in;
    return est;
  }

  const TimeScales ts = TimeScales::from_logs(d, lk, ls, a);
  const auto& G = make_bump_profile();
  const double inf = std::numeric_limits<double>::infinity();
  // all directions share the same norms except h_k, whose sup depends on the offset
  const TemporalProfile gt(ProfileKind::g_tilde, 0, ts), g(ProfileKind::g_small, 0, ts);
  double lh_p = kNegInf, lh_1 = kNegInf, lh_inf = kNegInf;
  for (int k = 0; k < d; ++k) {
    const TemporalProfile h(ProfileKind::h_corrector, k, ts);
    lh_p = std::max(lh_p, h.log_lq_norm(pp));
    lh_1 = std::max(lh_1, h.log_lq_norm(1.0));
    lh_inf = std::max(lh_inf, h.log_sup_norm());
  }
  const double lgt_p = gt.log_lq_norm(pp), lgt_1 = gt.log_lq_norm(1.0), lgt_d1 = gt.log_lq_norm(1.0, 1);
  const double lgt_inf = gt.log_sup_norm(), lg_1 = g.log_lq_norm(1.0), lg_inf = g.log_sup_norm();
  const double lgt_dinf = a * lk + lk + ls + std::log(G.lq_norm(inf, 1));

  auto A = [&](int j) { return in.log_sup_R + j * in.log_freq_x; };
  auto T = [&](int j) { return in.log_sup_R + in.log_freq_t + j * in.log_freq_x; };
  const double lsm = ls + lm;

  double lPhiCp = kNegInf;
  for (int j = 0; j <= p; ++j) lPhiCp = std::max(lPhiCp, j * lsm + std::log(prof.phi_deriv_sup(j)));
  const double lphi1 = std::log(prof.phi_lp(1.0)), lphi_inf = std::log(prof.phi_deriv_sup(0));

  // density perturbation in L^p_t C^p
  n["theta_p"] = l2 + ld / pp + lgt_p + pp * l2 + A(p) + lPhiCp;
  n["theta_o"] = -ls + ld + lh_p + A(p + 1);
  n["theta"] = lse({n["theta_p"], n["theta_o"]});

  // velocity perturbation in L^1_t W^{1,p}
  n["w"] = ld + lg_1 + (d - 1) * (1.0 - 1.0 / pp) * lm +
           lse({std::log(prof.phi_lp(pp)), lsm + std::log(prof.phi_deriv_lp(1, pp))});

  // defect parts in L^1_{t,x}
  n["R_osc_x"] = ld + A(2) - ls + std::log(osc_antiderivative_l1(prof, lm));
  n["R_osc_t"] = -ls + ld + lh_inf + T(0);
  n["R_acc"] = ld + lse({lgt_d1 + A(1), lgt_1 + T(1)}) - ls + (-1.0 - (d - 1) / r) * lm + std::log(prof.omega_lp(r));

  n["theta_L1"] = lse({l2 + ld + lgt_1 + A(0) + lphi1 - (d - 1) * lm, -ls + ld + lh_1 + A(1)});
  n["w_L1"] = ld + lg_1 + lphi1;
  const double ltheta_o_inf = -ls + ld + lh_inf + A(1);
  n["R_lin"] = lse({n["theta_L1"] + in.log_sup_u, in.log_sup_rho + n["w_L1"]});
  n["R_cor"] = ltheta_o_inf + n["w_L1"];

  std::vector<double> parts{n["R_osc_x"], n["R_osc_t"], n["R_acc"], n["R_lin"], n["R_cor"]};
  double lsup_L = kNegInf;
  if (L) {
    const int m = L->order();
    if (m > p) throw std::invalid_argument("estimate_step: operator order exceeds p");
    std::vector<double> w1;
    double lPhiCm = kNegInf;
    for (int j = 0; j <= m; ++j) {
      w1.push_back(j * lsm - (d - 1) * lm + std::log(prof.phi_deriv_lp(j, 1.0)));
      lPhiCm = std::max(lPhiCm, j * lsm + std::log(prof.phi_deriv_sup(j)));
    }
    n["R_L"] = ld + lgt_1 + m * l2 + A(m) + lse_vec(w1);
    lsup_L = ld + lgt_inf + m * l2 + A(m) + lPhiCm;
    parts.push_back(n["R_L"]);
  }
  n["R1"] = lse_vec(parts);

  // ||theta w + theta u + rho w||_{L^1}; ||Phi_k W_k||_{L^1} = 1 and int g~_k g_k = 1
  // theta_p w: improved Hoelder in x (period 1/sigma) and t (period 1/sigma) around ||R||_{L^1}
  const double lthp_w = lse({ld + in.log_L1_R, ld + A(1) - ls, ld + T(0) - ls});
  n["products_L1"] = lse({lthp_w, ltheta_o_inf + n["w_L1"], n["theta_L1"] + in.log_sup_u, in.log_sup_rho + n["w_L1"]});
  n["M_ratio"] = n["products_L1"] - in.log_L1_R;

  // bounds handed to the next step
  const double lG_inf = std::log(G.lq_norm(inf, 0));
  const double sup_osc_x = ld + lk + 2.0 * lG_inf + A(2) - ls + std::log(1.5);
  const double sup_osc_t = n["R_osc_t"];
  const double sup_acc = ld + lse({lgt_dinf + A(1), lgt_inf + T(1)}) - ls - lm + std::log(prof.omega_lp(inf));
  const double ltheta_inf = lse({l2 + lgt_inf + A(0) + lphi_inf, ltheta_o_inf});
  const double lw_inf = lg_inf + (d - 1) * lm + lphi_inf;
  const double sup_lin = lse({ltheta_inf + in.log_sup_u, in.log_sup_rho + lw_inf});
  const double sup_cor = ltheta_o_inf + lw_inf;

  FieldBounds& out = est.out;
  out.log_sup_R = lse({sup_osc_x, sup_osc_t, sup_acc, sup_lin, sup_cor, lsup_L});
  out.log_L1_R = n["R1"];
  out.log_freq_x = lse({in.log_freq_x, lsm + std::log(profile_frequency(prof))});
  out.log_freq_t = lse({in.log_freq_t, lk + ls + std::log(bump_frequency())});
  out.log_sup_rho = lse({in.log_sup_rho, ltheta_inf});
  out.log_sup_u = lse({in.log_sup_u, lw_inf});
  return est;
}

LogLogFit fit_loglog(const std::vector<double>& lx, const std::vector<double>& ly) {
  if (lx.size() != ly.size() || lx.size() < 3) throw std::invalid_argument("fit_loglog: need at least 3 points");
  const double nn = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double den = nn * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("fit_loglog: degenerate abscissae");
  LogLogFit f;
  f.slope = (nn * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / nn;
  for (std::size_t i = 0; i < lx.size(); ++i) f.residual = std::max(f.residual, std::abs(ly[i] - f.slope * lx[i] - f.intercept));
  return f;
}

ScalingStudy scaling_study(const std::string& quantity, const std::vector<double>& lambdas, const Exponents& ex,
                           const FieldBounds& in, const SpatialProfile& profile, const DiffOperator* L) {
  if (lambdas.size() < 3) throw std::invalid_argument("scaling_study: need at least 3 lambda values");
  ScalingStudy st;
  st.quantity = quantity;
  st.lambdas = lambdas;
  std::vector<double> lx;
  for (double lam : lambdas) {
    const ParameterSet ps = realize(ex, lam);
    const ScalingEstimate e = estimate_step(in, ps, profile, L);
    auto it = e.log_norm.find(quantity);
    if (it == e.log_norm.end()) throw std::invalid_argument("scaling_study: unknown quantity '" + quantity + "'");
    lx.push_back(std::log(lam));
    st.log_values.push_back(it->second);
  }
  st.threshold = -ex.gamma.to_double() + 0.05;
  for (double v : st.log_values)
    if (!std::isfinite(v)) {
      st.pass = false;
      return st;
    }
  st.fit = fit_loglog(lx, st.log_values);
  st.pass = st.fit.slope <= st.threshold && st.fit.residual <= 0.1;
  return st;
}

}  // namespace ci
