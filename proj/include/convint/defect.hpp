#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "convint/perturbation.hpp"
#include "convint/timefield.hpp"

namespace ci {

// (rho, u, R) solving d_t rho + div(rho u) = div R, all on one grid
struct DefectTriple {
  ScalarTimeField rho;
  VectorTimeField u;
  VectorTimeField R;

  const Grid& grid() const { return rho.grid; }
};

DefectTriple lift(const DefectTriple& tr, const Grid& g);

// constant-coefficient operator sum_alpha c_alpha d^alpha
struct DiffOperator {
  std::vector<std::pair<std::array<int, 3>, double>> terms;

  int order() const;
  bool empty() const { return terms.empty(); }
  PeriodicField apply(const PeriodicField& f) const;
  static DiffOperator laplacian(int d);
  static DiffOperator bilaplacian(int d);
};

VectorTimeField osc_x(const Perturbation& P);
VectorTimeField osc_t(const Perturbation& P);
VectorTimeField acc(const Perturbation& P);
VectorTimeField lin(const ScalarTimeField& theta, const VectorTimeField& u, const ScalarTimeField& rho,
                    const VectorTimeField& w);
VectorTimeField cor(const ScalarTimeField& theta_o, const VectorTimeField& w);
// R L sum_k g~_k R_k Phi_k; requires order(L) <= p
VectorTimeField diffusion_defect(const Perturbation& P, const DiffOperator& L);

struct DefectParts {
  VectorTimeField osc_x, osc_t, acc, lin, cor;
  std::optional<VectorTimeField> diffusion;

  std::vector<std::pair<std::string, const VectorTimeField*>> named() const;
};

DefectParts make_parts(const Perturbation& P, const DefectTriple& in, const DiffOperator* L = nullptr);
VectorTimeField assemble_R1(const DefectParts& parts);

// (rho + theta, u + w, R1) on the block grid
DefectTriple next_triple(const Perturbation& P, const DefectTriple& in, const DefectParts& parts);

struct ResidualReport {
  std::vector<double> times;
  std::vector<double> values;
  double max = 0.0;
};

// ||d_t rho + div(rho u) - div R||_2 / (1 + ||d_t rho||_2)
double residual_at(const DefectTriple& tr, double t);
ResidualReport residual(const DefectTriple& tr, const std::vector<double>& times);

// ||div(R_osc,x + R_osc,t + R_acc) - (d_t theta + div(theta_p w + R))||_2 relative to the larger side
double telescoping_at(const Perturbation& P, const DefectParts& parts, double t);
// ||d_t theta_o - sum_k g~_k g_k d_k R_k + div R - div R_osc,t||_2, relative
double o3_cancellation_at(const Perturbation& P, const DefectParts& parts, double t);

// ||div R_L - P_{!=0} L(sum_k g~_k R_k Phi_k)||_2 relative to the right side
double diffusion_identity_at(const Perturbation& P, const DefectParts& parts, const DiffOperator& L, double t);

// probe times: one per bump interior plus points between bumps, within [t_lo, t_hi]
std::vector<double> probe_times(const ProfileSet& prof, double t_lo, double t_hi, int count);

}  // namespace ci
