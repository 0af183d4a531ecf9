#include "convint/mikado.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "quad.hpp"

namespace ci {

namespace {

double bder(const SmoothBump& b, double y, int j) {
  if (y <= 0.0 || y >= 1.0) return 0.0;
  return j <= 4 ? b.derivs(y)[j] : b.taylor_derivs(y, j)[j];
}

std::vector<int> other_axes(int d, int k) {
  std::vector<int> a;
  for (int i = 0; i < d; ++i)
    if (i != k) a.push_back(i);
  return a;
}

template <class F>
PeriodicField from_index(const Grid& g, F&& fn) {
  std::vector<double> v(g.size());
  int idx[3] = {0, 0, 0};
  std::size_t p = 0;
  if (g.d == 2) {
    for (idx[0] = 0; idx[0] < g.n; ++idx[0])
      for (idx[1] = 0; idx[1] < g.n; ++idx[1]) v[p++] = fn(idx);
  } else {
    for (idx[0] = 0; idx[0] < g.n; ++idx[0])
      for (idx[1] = 0; idx[1] < g.n; ++idx[1])
        for (idx[2] = 0; idx[2] < g.n; ++idx[2]) v[p++] = fn(idx);
  }
  return PeriodicField(g, std::move(v));
}

}  // namespace

SpatialProfile::SpatialProfile(int d, double beta) : d_(d), bump_(0.0, 1.0, beta) {
  if (d != 2 && d != 3) throw std::invalid_argument("SpatialProfile: unsupported dimension");
  c_ = 1.0;
  c_ = 1.0 / phi_lp(2.0);
  lp_memo_.clear();
  sup_memo_.clear();
  const double check = phi_lp(2.0);
  if (std::abs(check * check - 1.0) > 1e-12) throw std::logic_error("SpatialProfile: normalization failed");
}

double SpatialProfile::phi(const double* y) const {
  double v = c_ * bder(bump_, y[0], 2);
  if (d_ == 3) v *= bder(bump_, y[1], 0);
  return v;
}

void SpatialProfile::omega(const double* y, double* out) const {
  out[0] = c_ * bder(bump_, y[0], 1);
  if (d_ == 3) {
    out[0] *= bder(bump_, y[1], 0);
    out[1] = 0.0;
  }
}

double SpatialProfile::b_sup(int j) const {
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = sup_memo_.find(j);
    if (it != sup_memo_.end()) return it->second;
  }
  const int n = 20000;
  double best = 0.0, yb = 0.5;
  for (int i = 1; i < n; ++i) {
    const double y = static_cast<double>(i) / n;
    const double v = std::abs(bder(bump_, y, j));
    if (v > best) {
      best = v;
      yb = y;
    }
  }
  double lo = std::max(1e-9, yb - 1.0 / n), hi = std::min(1.0 - 1e-9, yb + 1.0 / n);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    if (std::abs(bder(bump_, a, j)) > std::abs(bder(bump_, b, j)))
      hi = b;
    else
      lo = a;
  }
  best = std::max(best, std::abs(bder(bump_, 0.5 * (lo + hi), j)));
  std::lock_guard<std::mutex> lock(memo_mutex_);
  sup_memo_[j] = best;
  return best;
}

double SpatialProfile::b_lp(int j, double p) const {
  if (std::isinf(p)) return b_sup(j);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = lp_memo_.find({j, p});
    if (it != lp_memo_.end()) return it->second;
  }
  auto fn = [this, j](double y) { return bder(bump_, y, j); };
  const double v = std::pow(quad::abs_power_integral(fn, 0.0, 1.0, p), 1.0 / p);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  lp_memo_[{j, p}] = v;
  return v;
}

double SpatialProfile::phi_integral() const {
  auto fn = [this](double y) { return bder(bump_, y, 2); };
  double v = c_ * quad::gauss_panels(fn, 0.0, 1.0, 32);
  if (d_ == 3) v *= quad::gauss_panels([this](double y) { return bder(bump_, y, 0); }, 0.0, 1.0, 32);
  return v;
}

double SpatialProfile::phi_lp(double p) const {
  double v = c_ * b_lp(2, p);
  if (d_ == 3) v *= b_lp(0, p);
  return v;
}

double SpatialProfile::omega_lp(double p) const {
  double v = c_ * b_lp(1, p);
  if (d_ == 3) v *= b_lp(0, p);
  return v;
}

double SpatialProfile::phi_deriv_sup(int j) const {
  if (d_ == 2) return c_ * b_sup(2 + j);
  double m = 0.0;
  for (int a = 0; a <= j; ++a) m = std::max(m, c_ * b_sup(2 + a) * b_sup(j - a));
  return m;
}

double SpatialProfile::phi_deriv_lp(int j, double p) const {
  if (d_ == 2) return c_ * b_lp(2 + j, p);
  double s = 0.0;
  for (int a = 0; a <= j; ++a) s += c_ * b_lp(2 + a, p) * b_lp(j - a, p);
  return s;
}

double SpatialProfile::phi_cs(int s) const {
  double m = 0.0;
  for (int j = 0; j <= s; ++j) m = std::max(m, phi_deriv_sup(j));
  return m;
}

std::shared_ptr<const SpatialProfile> make_spatial_profile(int d, double beta) {
  return std::make_shared<const SpatialProfile>(d, beta);
}

int mikado_grid_size(const SpatialProfile& profile, int sigma, double mu, int min_n) {
  const double need = 8.0 * sigma * mu * profile.support_width_factor();
  int n = 4;
  while (n < need || n < min_n) n *= 2;
  return n;
}

MikadoSet::MikadoSet(std::shared_ptr<const SpatialProfile> profile, int sigma, double mu, const Grid& grid,
                     std::vector<MikadoBlock> blocks)
    : profile_(std::move(profile)), sigma_(sigma), mu_(mu), grid_(grid), blocks_(std::move(blocks)) {}

double block_phi_lp(const SpatialProfile& prof, double mu, double p) {
  const int d = prof.d();
  const double e = std::isinf(p) ? 0.0 : -(d - 1) / p;
  return std::pow(mu, e) * prof.phi_lp(p);
}

double block_w_lp(const SpatialProfile& prof, double mu, double p) {
  const int d = prof.d();
  const double e = std::isinf(p) ? (d - 1) : (d - 1) * (1.0 - 1.0 / p);
  return std::pow(mu, e) * prof.phi_lp(p);
}

double block_omega_lp(const SpatialProfile& prof, double mu, double p) {
  const int d = prof.d();
  const double e = std::isinf(p) ? -1.0 : -1.0 - (d - 1) / p;
  return std::pow(mu, e) * prof.omega_lp(p);
}

double MikadoSet::phi_lp(double p) const { return block_phi_lp(*profile_, mu_, p); }
double MikadoSet::w_lp(double p) const { return block_w_lp(*profile_, mu_, p); }
double MikadoSet::omega_lp(double p) const { return block_omega_lp(*profile_, mu_, p); }

MikadoBlock build_mikado_block(const SpatialProfile& profile, int k, int sigma, double mu, const Grid& grid) {
  const int d = grid.d;
  if (profile.d() != d) throw std::invalid_argument("build_mikado_block: profile dimension mismatch");
  if (k < 0 || k >= d) throw std::out_of_range("build_mikado_block: direction out of range");
  if (sigma < 1) throw std::invalid_argument("build_mikado_block: sigma must be a positive integer");
  if (!(mu >= 1.0)) throw std::invalid_argument("build_mikado_block: mu must be >= 1");
  const double need = 8.0 * sigma * mu * profile.support_width_factor();
  if (grid.n < need)
    throw UnresolvedField("build_mikado_block: grid " + grid.str() + " too coarse for sigma*mu = " +
                          std::to_string(sigma * mu) + " (need n >= " + std::to_string(need) + ")");
  const int n = grid.n;
  const SmoothBump& b = profile.bump();
  const double c = profile.normalization();
  std::vector<double> B0(n), B1(n), B2(n);
  for (int i = 0; i < n; ++i) {
    const long long m = (static_cast<long long>(sigma) * i) % n;
    const double y = mu * static_cast<double>(m) / n;
    B0[i] = bder(b, y, 0);
    B1[i] = bder(b, y, 1);
    B2[i] = bder(b, y, 2);
  }
  const auto ax = other_axes(d, k);
  const double mud = std::pow(mu, d - 1);
  MikadoBlock blk;
  blk.k = k;
  if (d == 2) {
    const int a1 = ax[0];
    blk.Phi = from_index(grid, [&](const int* i) { return c * B2[i[a1]]; });
    std::vector<PeriodicField> om(2, PeriodicField(grid));
    om[a1] = from_index(grid, [&](const int* i) { return c * B1[i[a1]] / mu; });
    blk.Omega = VectorField(std::move(om));
  } else {
    const int a1 = ax[0], a2 = ax[1];
    blk.Phi = from_index(grid, [&](const int* i) { return c * B2[i[a1]] * B0[i[a2]]; });
    std::vector<PeriodicField> om(3, PeriodicField(grid));
    om[a1] = from_index(grid, [&](const int* i) { return c * B1[i[a1]] * B0[i[a2]] / mu; });
    blk.Omega = VectorField(std::move(om));
  }
  std::vector<PeriodicField> w(d, PeriodicField(grid)), pw(d, PeriodicField(grid));
  w[k] = blk.Phi * mud;
  pw[k] = (blk.Phi * blk.Phi) * mud;
  blk.W = VectorField(std::move(w));
  blk.PhiW = VectorField(std::move(pw));
  return blk;
}

MikadoSet build_mikado_set(std::shared_ptr<const SpatialProfile> profile, int sigma, double mu, const Grid& grid) {
  std::vector<MikadoBlock> blocks;
  for (int k = 0; k < grid.d; ++k) blocks.push_back(build_mikado_block(*profile, k, sigma, mu, grid));
  return MikadoSet(std::move(profile), sigma, mu, grid, std::move(blocks));
}

std::vector<CheckRow> check_mikado(const SpatialProfile& profile, int sigma, double mu, const Grid& grid,
                                   const std::vector<double>& lp_exponents) {
  std::vector<CheckRow> rows;
  const int d = grid.d;
  auto add = [&](int k, const std::string& prop, double measured, double target, double tol) {
    CheckRow r;
    r.id = "blocks." + prop;
    r.k = k;
    r.property = prop;
    r.measured = measured;
    r.target = target;
    r.tolerance = tol;
    r.pass = std::isfinite(measured) && std::abs(measured - target) <= tol;
    rows.push_back(r);
  };
  for (int k = 0; k < d; ++k) {
    MikadoBlock blk = build_mikado_block(profile, k, sigma, mu, grid);
    double mo = 0.0, mw = 0.0;
    for (int a = 0; a < d; ++a) {
      mo = std::max(mo, std::abs(blk.Omega[a].mean()));
      mw = std::max(mw, std::abs(blk.W[a].mean()));
    }
    add(k, "mean_Phi", std::abs(blk.Phi.mean()), 0.0, 1e-10);
    add(k, "mean_Omega", mo, 0.0, 1e-10);
    add(k, "mean_W", mw, 0.0, 1e-10);

    double wscale = 0.0, pwscale = 0.0;
    for (int a = 0; a < d; ++a) {
      wscale += l2_norm(derivative(blk.W[k], a));
      pwscale += l2_norm(derivative(blk.PhiW[k], a));
    }
    add(k, "div_W_rel", l2_norm(divergence(blk.W)) / wscale, 0.0, 1e-8);
    add(k, "div_PhiW_rel", l2_norm(divergence(blk.PhiW)) / pwscale, 0.0, 1e-8);
    {
      PeriodicField sp = blk.Phi * static_cast<double>(sigma);
      add(k, "div_Omega_rel", l2_norm(divergence(blk.Omega) - sp) / l2_norm(sp), 0.0, 1e-8);
    }
    double avg = 0.0;
    for (int a = 0; a < d; ++a) avg = std::max(avg, std::abs(blk.PhiW[a].mean() - (a == k ? 1.0 : 0.0)));
    add(k, "avg_PhiW_minus_ek", avg, 0.0, 1e-8);
    double off = 0.0;
    for (int a = 0; a < d; ++a)
      if (a != k) off = std::max(off, blk.W[a].max_abs());
    add(k, "W_transverse_components", off, 0.0, 0.0);
    add(k, "dk_Phi", derivative(blk.Phi, k).max_abs(), 0.0, 1e-12 * std::max(1.0, blk.Phi.max_abs()));

    for (double p : lp_exponents) {
      const std::string ps = std::isinf(p) ? "inf" : std::to_string(static_cast<int>(p));
      const double tp = block_phi_lp(profile, mu, p), tw = block_w_lp(profile, mu, p),
                   to = block_omega_lp(profile, mu, p);
      add(k, "Lp_Phi_rel_p" + ps, lp_norm(blk.Phi, p) / tp - 1.0, 0.0, 1e-6);
      add(k, "Lp_W_rel_p" + ps, norm(blk.W, NormSpec::Lp(p)) / tw - 1.0, 0.0, 1e-6);
      add(k, "Lp_Omega_rel_p" + ps, norm(blk.Omega, NormSpec::Lp(p)) / to - 1.0, 0.0, 1e-6);
    }
  }
  return rows;
}

void write_check_csv(std::ostream& os, const std::vector<CheckRow>& rows) {
  os << "k,property,measured,target,tolerance,pass\n";
  os.precision(10);
  for (const auto& r : rows)
    os << r.k << ',' << r.property << ',' << r.measured << ',' << r.target << ',' << r.tolerance << ','
       << (r.pass ? "true" : "false") << '\n';
}

}  // namespace ci
