#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "convint/mikado.hpp"
#include "convint/params.hpp"
#include "convint/spectral.hpp"
#include "convint/temporal.hpp"
#include "convint/timefield.hpp"

namespace ci {

// R_k(x, t): the k-th component of a defect field
struct CoefficientField {
  int k = 0;
  ScalarTimeField field;
};

// Chebyshev points of the second kind on [t_lo, t_hi], t_j = mid + half cos(pi j / degree)
std::vector<double> chebyshev_nodes(double t_lo, double t_hi, int degree);
// barycentric interpolant through snapshots at chebyshev_nodes(t_lo, t_hi, values.size() - 1);
// derivatives come from the spectral differentiation matrix; zero outside [t_lo, t_hi]
ScalarTimeField chebyshev_interpolant(double t_lo, double t_hi, std::vector<PeriodicField> values, int max_order = 2);
ScalarTimeField chebyshev_sample(const std::function<PeriodicField(double)>& fn, const Grid& g, double t_lo,
                                 double t_hi, int degree, int max_order = 2);

// componentwise split R = sum_k R_k e_k; rejects temporal support touching 0 or 1
std::vector<CoefficientField> decompose_defect(const VectorTimeField& R);

struct ProfileSet {
  TimeScales ts;
  std::vector<TemporalProfile> g_tilde, g, product, h;
};
ProfileSet make_profiles(const ParameterSet& ps);

// sum of  scale * profile(t) * coeff(x, t) * block(x)
struct SeparatedTerm {
  std::optional<TemporalProfile> profile;  // absent: 1
  std::optional<ScalarTimeField> coeff;    // absent: 1
  std::optional<VectorField> block;        // absent: 1 (scalar fields only)
  double scale = 1.0;
};

class SeparatedField {
public:
  SeparatedField() = default;
  SeparatedField(const Grid& g, int ncomp, bool project_mean = false);

  void add(SeparatedTerm term);
  const Grid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<SeparatedTerm>& terms() const { return terms_; }
  int max_order() const;
  std::pair<double, double> support() const;

  VectorField eval(double t, int order = 0) const;
  PeriodicField eval_scalar(double t, int order = 0) const;
  VectorTimeField as_vector() const;
  ScalarTimeField as_scalar() const;

private:
  Grid grid_;
  int ncomp_ = 1;
  bool project_ = false;
  std::vector<SeparatedTerm> terms_;
};

// w = sum_k g_k W_k
SeparatedField build_w(const MikadoSet& blocks, const ProfileSet& prof, const ParameterSet& ps);

struct ThetaParts {
  SeparatedField theta_p;  // - sum_k g~_k R_k Phi_k (mean not removed)
  SeparatedField theta_o;  // sigma^{-1} sum_k h_k d_k R_k
  ScalarTimeField theta;   // P_{!=0} theta_p + theta_o
};
ThetaParts build_theta(const std::vector<CoefficientField>& Rk, const MikadoSet& blocks, const ProfileSet& prof,
                       const ParameterSet& ps);

// everything the defect assembler needs from one perturbation step
struct Perturbation {
  ParameterSet ps;
  std::shared_ptr<const MikadoSet> blocks;
  ProfileSet prof;
  std::vector<CoefficientField> Rk;  // on the block grid
  ThetaParts theta;
  SeparatedField w;
};

Perturbation build_perturbation(const VectorTimeField& R, std::shared_ptr<const MikadoSet> blocks,
                                const ParameterSet& ps);

}  // namespace ci
