#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ci {

using cplx = std::complex<double>;

struct UnresolvedField : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  int d = 2;
  int n = 16;

  Grid() = default;
  Grid(int dim, int n_per_axis);

  std::size_t size() const;
  // number of r2c coefficients: n^(d-1) * (n/2 + 1)
  std::size_t spec_size() const;
  double h() const { return 1.0 / n; }
  bool operator==(const Grid& o) const { return d == o.d && n == o.n; }
  bool operator!=(const Grid& o) const { return !(*this == o); }
  std::string str() const;
};

using Point = std::array<double, 3>;

class PeriodicField {
public:
  PeriodicField() = default;
  explicit PeriodicField(const Grid& g);
  PeriodicField(const Grid& g, std::vector<double> values);

  static PeriodicField from_function(const Grid& g, const std::function<double(const Point&)>& f);
  static PeriodicField constant(const Grid& g, double c);
  // coefficients indexed as in spectrum(); normalized so that f = sum c_k exp(2 pi i k.x)
  static PeriodicField from_spectrum(const Grid& g, std::vector<cplx> coeffs);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return *values_; }
  const std::vector<cplx>& spectrum() const;
  bool empty() const { return !values_; }

  double operator[](std::size_t i) const { return (*values_)[i]; }
  double mean() const;
  double max_abs() const;

  PeriodicField operator+(const PeriodicField& o) const;
  PeriodicField operator-(const PeriodicField& o) const;
  PeriodicField operator*(const PeriodicField& o) const;
  PeriodicField operator-() const;
  PeriodicField operator*(double c) const;
  PeriodicField operator+(double c) const;
  friend PeriodicField operator*(double c, const PeriodicField& f) { return f * c; }

  PeriodicField map(const std::function<double(double)>& fn) const;

private:
  struct Cache;
  Grid grid_;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<Cache> cache_;
};

class VectorField {
public:
  VectorField() = default;
  explicit VectorField(std::vector<PeriodicField> comps);
  static VectorField zeros(const Grid& g, int ncomp);

  const Grid& grid() const;
  int ncomp() const { return static_cast<int>(c_.size()); }
  const PeriodicField& operator[](int i) const { return c_.at(i); }
  const std::vector<PeriodicField>& components() const { return c_; }

  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField operator*(double c) const;
  VectorField operator-() const { return *this * -1.0; }
  VectorField scaled(const PeriodicField& s) const;
  friend VectorField operator*(double c, const VectorField& v) { return v * c; }

private:
  std::vector<PeriodicField> c_;
};

struct NormSpec {
  enum class Kind { Lp, Wsp, Ck };
  Kind kind = Kind::Lp;
  double p = 2.0;  // use infinity() for sup norms
  int s = 0;       // differentiation order
  bool homogeneous = false;  // Wsp: top-order seminorm only

  static NormSpec Lp(double p) { return {Kind::Lp, p, 0, false}; }
  static NormSpec Linf();
  static NormSpec Ck(int k);
  static NormSpec Wsp(int s, double p) { return {Kind::Wsp, p, s, false}; }
  static NormSpec Wsp_seminorm(int s, double p) { return {Kind::Wsp, p, s, true}; }
  void validate() const;
};

// iterate over every spectral coefficient; k holds signed wave numbers (unused entries zero)
void for_each_mode(const Grid& g, const std::function<void(std::size_t, const std::array<int, 3>&)>& fn);

PeriodicField apply_multiplier(const PeriodicField& f, const std::function<cplx(const std::array<int, 3>&)>& m);

PeriodicField derivative(const PeriodicField& f, int axis, int order = 1);
PeriodicField partial(const PeriodicField& f, const std::array<int, 3>& alpha);
VectorField gradient(const PeriodicField& f);
PeriodicField divergence(const VectorField& v);
PeriodicField laplacian(const PeriodicField& f);

PeriodicField project_mean_zero(const PeriodicField& f);

// R f = Delta^{-1} grad f; rejects input with nonzero mean
VectorField anti_divergence(const PeriodicField& f);
// same operator applied to P_{!=0} f without the mean check
VectorField anti_divergence_projected(const PeriodicField& f);
VectorField bilinear_antidiv(const PeriodicField& a, const PeriodicField& f);
VectorField bilinear_antidiv_vec(const VectorField& a_grad, const VectorField& F);

// spectral interpolation / truncation onto another grid of the same dimension
PeriodicField resample(const PeriodicField& f, const Grid& target);
VectorField resample(const VectorField& f, const Grid& target);
// x -> f(sigma x) on the target grid, by moving mode k to sigma k
PeriodicField rescale(const PeriodicField& f, int sigma, const Grid& target);

// relative L2 amplitude of modes with some |k_a| > n/4
double tail_fraction(const PeriodicField& f);
bool is_resolved(const PeriodicField& f, double tol = 1e-6);

double norm(const PeriodicField& f, const NormSpec& spec, double resolution_tol = 1e-6);
double norm(const VectorField& v, const NormSpec& spec, double resolution_tol = 1e-6);
double lp_norm(const PeriodicField& f, double p);
double l2_norm(const PeriodicField& f);
double l2_norm(const VectorField& v);
double inner(const PeriodicField& a, const PeriodicField& b);

double improved_holder_gap(const PeriodicField& a, const PeriodicField& f, int sigma, double r);

// all multi-indices of total order s in dimension d
std::vector<std::array<int, 3>> multi_indices(int d, int s);

}  // namespace ci
