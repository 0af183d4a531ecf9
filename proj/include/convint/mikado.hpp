#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "convint/bump.hpp"
#include "convint/spectral.hpp"

namespace ci {

// (phi, Omega) on R^{d-1} with div Omega = phi, supp in (0,1)^{d-1}, int phi^2 = 1.
// Built from b(y) = exp(beta - beta/(4y(1-y))):
//   d = 2: Omega = c b',               phi = c b''
//   d = 3: Omega = (c b'(y1) b(y2), 0), phi = c b''(y1) b(y2)
class SpatialProfile {
public:
  explicit SpatialProfile(int d, double beta = 32.0);

  int d() const { return d_; }
  double beta() const { return bump_.beta(); }
  double normalization() const { return c_; }
  const SmoothBump& bump() const { return bump_; }

  // y holds d-1 coordinates
  double phi(const double* y) const;
  void omega(const double* y, double* out) const;

  double phi_integral() const;
  double phi_lp(double p) const;
  double omega_lp(double p) const;
  // max over |alpha| = j of sup |d^alpha phi|
  double phi_deriv_sup(int j) const;
  // sum over |alpha| = j of ||d^alpha phi||_p
  double phi_deriv_lp(int j, double p) const;
  // C^s norm with the max-over-orders convention
  double phi_cs(int s) const;

  // 1D quantities of b^(j)
  double b_sup(int j) const;
  double b_lp(int j, double p) const;

  // grid points per unit of sigma*mu required by the resolution rule
  double support_width_factor() const { return 4.0; }

private:
  int d_;
  SmoothBump bump_;
  double c_ = 1.0;
  mutable std::mutex memo_mutex_;
  mutable std::map<std::pair<int, double>, double> lp_memo_;
  mutable std::map<int, double> sup_memo_;
};

struct MikadoBlock {
  int k = 0;
  PeriodicField Phi;
  VectorField Omega;
  VectorField W;
  VectorField PhiW;  // closed-form product Phi_k W_k
};

class MikadoSet {
public:
  MikadoSet(std::shared_ptr<const SpatialProfile> profile, int sigma, double mu, const Grid& grid,
            std::vector<MikadoBlock> blocks);

  const Grid& grid() const { return grid_; }
  int sigma() const { return sigma_; }
  double mu() const { return mu_; }
  const SpatialProfile& profile() const { return *profile_; }
  std::shared_ptr<const SpatialProfile> profile_ptr() const { return profile_; }
  const MikadoBlock& block(int k) const { return blocks_.at(k); }
  int size() const { return static_cast<int>(blocks_.size()); }

  // closed-form norms
  double phi_lp(double p) const;
  double w_lp(double p) const;
  double omega_lp(double p) const;

private:
  std::shared_ptr<const SpatialProfile> profile_;
  int sigma_;
  double mu_;
  Grid grid_;
  std::vector<MikadoBlock> blocks_;
};

std::shared_ptr<const SpatialProfile> make_spatial_profile(int d, double beta = 32.0);

// smallest admissible power-of-two grid for (sigma, mu)
int mikado_grid_size(const SpatialProfile& profile, int sigma, double mu, int min_n = 16);

// closed-form L^p norms of Phi_k, W_k, Omega_k (independent of sigma)
double block_phi_lp(const SpatialProfile& prof, double mu, double p);
double block_w_lp(const SpatialProfile& prof, double mu, double p);
double block_omega_lp(const SpatialProfile& prof, double mu, double p);

MikadoBlock build_mikado_block(const SpatialProfile& profile, int k, int sigma, double mu, const Grid& grid);
MikadoSet build_mikado_set(std::shared_ptr<const SpatialProfile> profile, int sigma, double mu, const Grid& grid);

struct CheckRow {
  std::string id;
  int k = -1;
  std::string property;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// per-block property rows; builds one block at a time to bound memory
std::vector<CheckRow> check_mikado(const SpatialProfile& profile, int sigma, double mu, const Grid& grid,
                                   const std::vector<double>& lp_exponents = {2.0, 4.0});
void write_check_csv(std::ostream& os, const std::vector<CheckRow>& rows);

}  // namespace ci
