#pragma once

#include "rlab/aca.hpp"
#include "rlab/resonance.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rlab {

// Frequencies xi = (i - n/2) dxi per axis, i in [0, n); the last axis is the
// fastest-running index of the flat layout.
class SpectralGrid {
 public:
  SpectralGrid(int d, int n, double xi_max);

  int dim() const { return d_; }
  int n() const { return n_; }
  double xi_max() const { return xi_max_; }
  double dxi() const { return dxi_; }
  double period() const { return 2.0 * kPi / dxi_; }
  double dx() const { return period() / n_; }
  double weight() const;  // dxi^d
  Eigen::Index size() const { return size_; }

  Vec point(Eigen::Index flat) const;
  // x_j = (j - n/2) dx, the physical grid dual to point()
  Vec x_point(Eigen::Index flat) const;
  std::vector<int> multi(Eigen::Index flat) const;
  Eigen::Index flat(const std::vector<int>& idx) const;
  // Grid index of xi, or -1 when xi is off the lattice or outside the box.
  Eigen::Index locate(const Vec& xi, double tol = 1e-9) const;

  bool operator==(const SpectralGrid& o) const { return d_ == o.d_ && n_ == o.n_ && xi_max_ == o.xi_max_; }

 private:
  int d_, n_;
  double xi_max_, dxi_;
  Eigen::Index size_;
};

enum class FieldRole { F, G, H, U };
std::string to_string(FieldRole r);

struct SpectralField {
  SpectralGrid grid;
  CVec values;
  FieldRole role = FieldRole::F;

  SpectralField(SpectralGrid g, FieldRole r = FieldRole::F);
  static SpectralField from_function(const SpectralGrid& g, const std::function<cplx(const Vec&)>& f,
                                     FieldRole r = FieldRole::F);
  // (sum |v|^2 dxi^d)^(1/2)
  double l2() const;
  double l1() const;
  double sup() const;
  // Largest |xi|_inf with |value| > rel * max|value|; 0 for a zero field.
  double support_radius(double rel = 1e-12) const;
};

// Fourier convention f^(xi) = (2 pi)^{-d/2} int e^{-i x xi} f(x) dx on the
// grid pair point()/x_point().
CVec to_physical(const SpectralField& F);
SpectralField from_physical(const SpectralGrid& g, const CVec& values, FieldRole r = FieldRole::F);
double physical_l2(const SpectralGrid& g, const CVec& values);

// m(eta + zeta, eta) ~ outer(eta + zeta) sum_k p(k, eta) q(k, zeta)
struct SeparatedForm {
  int rank = 0;
  std::function<double(int, const Vec&)> p, q;
  std::function<double(const Vec&)> outer;  // optional; 1 when empty
  double max_error = 0.0;
};

// |xi|_inf, |eta|_inf and |xi - eta|_inf bounds outside of which m vanishes.
struct SupportBox {
  double xi = std::numeric_limits<double>::infinity();
  double eta = std::numeric_limits<double>::infinity();
  double zeta = std::numeric_limits<double>::infinity();
  bool contains(const Vec& xi_, const Vec& eta_) const;
};

class BilinearSymbol {
 public:
  using Fn = std::function<double(const Vec&, const Vec&)>;

  BilinearSymbol(Fn m, SupportBox box = {}, std::string label = "symbol");
  static BilinearSymbol constant(double value);
  static BilinearSymbol zero();

  // Zero outside the support box.
  double operator()(const Vec& xi, const Vec& eta) const;
  const SupportBox& support() const { return box_; }
  const std::string& label() const { return label_; }

  const std::optional<SeparatedForm>& separated() const { return sep_; }
  BilinearSymbol with_separated(SeparatedForm s) const;
  // Cross approximation of M(eta, zeta) = m(eta + zeta, eta) on the grid; the
  // resulting form is exact at grid points only.
  BilinearSymbol with_aca(const SpectralGrid& g, const AcaOptions& opt = {}) const;
  bool is_zero() const { return zero_; }

 private:
  Fn m_;
  SupportBox box_;
  std::string label_;
  std::optional<SeparatedForm> sep_;
  bool zero_ = false;
};

enum class ProductMode { Direct, Separated };

// Refuses (NumericalRefusal) when inputs reach beyond 75% of the box or the
// output would leave it.
void check_aliasing(const BilinearSymbol& m, const SpectralField& F, const SpectralField& G);

// xi -> sum_eta m(xi, eta) F(eta) G(xi - eta) dxi^d
SpectralField pseudo_product(const BilinearSymbol& m, const SpectralField& F, const SpectralField& G,
                             ProductMode mode);

// Multiplication by e^{i t a(xi)}.
SpectralField propagate(const Dispersion& a, double t, const SpectralField& F);

struct EvolveOptions {
  double t_max = 1.0;
  int steps = 100;                 // uniform RK4 steps over [0, t_max]
  std::vector<double> snapshots;   // sorted, in (0, t_max]; empty -> {t_max}
  std::optional<ProductMode> mode; // default: separated when available
};

// Upper bound of |phi| over the pairs reached by m, F, G.
double phase_bound(const PhaseTriple& triple, const BilinearSymbol& m, const SpectralField& F,
                   const SpectralField& G);

// d_t h = e^{-i t a} T_m(e^{i t b} F, e^{i t c} G), h(0) = 0, classical RK4.
std::vector<SpectralField> duhamel_evolve(const PhaseTriple& triple, const BilinearSymbol& m, const SpectralField& F,
                                          const SpectralField& G, const EvolveOptions& opt);

// (2 pi)^{-d/2} sum_xi e^{i x xi} e^{i t a(xi)} h(xi) dxi^d
std::vector<cplx> evaluate_u(const SpectralField& h, const Dispersion& a, double t, const std::vector<Vec>& points);

struct ProfileLimit {
  SpectralField h_inf;
  std::vector<char> converged;  // per frequency
  Vec extrapolation_error;      // |last - previous Richardson level|
  std::vector<double> eps;
};

// -sum m F G / (i phi - eps) dxi^d for each eps, extrapolated to eps = 0.
ProfileLimit profile_limit(const PhaseTriple& triple, const BilinearSymbol& m, const SpectralField& F,
                           const SpectralField& G, std::vector<double> eps = {4e-2, 2e-2, 1e-2},
                           double rel_tol = 1e-4);

}  // namespace rlab
