#pragma once

#include "rlab/spectral.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace rlab {

// amplitude * exp(-|x - center|^2 / (2 width^2)), times null_direction.(x - center)
// when a null direction is given (the bump then vanishes at its center).
struct GaussianData {
  Vec center;
  double width = 1.0;
  double amplitude = 1.0;
  std::optional<Vec> null_direction;

  double operator()(const Vec& x) const;
};

// int_S^inf e^{i s u} s^{-nu} ds for nu in {1/2, 1, 3/2, ...}; u = 0 needs nu > 1.
cplx oscillatory_tail(double nu, double S, double u);

// Time integrals of I_xi(s) = chi(xi) int f(eta) g(xi - eta) e^{i s phi(xi, eta)} deta
// in closed form in eta, for triples of quadratic profiles c|.|^2 + offset and
// Gaussian data. Used where grid quadrature in eta cannot resolve e^{i s phi}.
class GaussianInteraction {
 public:
  GaussianInteraction(const PhaseTriple& triple, GaussianData f, GaussianData g,
                      std::function<double(const Vec&)> chi = {});

  int dim() const { return d_; }
  cplx integrand(const Vec& xi, double s) const;
  // space-resonant eta, H(xi)
  Vec stationary_eta(const Vec& xi) const;
  // phi(xi, H(xi)); vanishes on the outcome set
  double resonance_function(const Vec& xi) const;
  // bound on |chi f(eta) g(xi - eta)| over eta
  double amplitude_bound(const Vec& xi) const;

  struct Series {
    std::vector<cplx> h;  // h(t_k, xi)
    cplx h_inf{0, 0};
  };
  // h(t, xi) = int_0^t I_xi ds at increasing times, and the t -> inf limit from
  // quadrature up to tail_start plus a two-term asymptotic tail.
  Series series(const Vec& xi, const std::vector<double>& times, double tail_start = 2000.0) const;
  cplx limit(const Vec& xi, double tail_start = 2000.0) const { return series(xi, {}, tail_start).h_inf; }

 private:
  int d_;
  double ab_, ob_, ac_, oc_;  // b = ab |.|^2 + ob, c = ac |.|^2 + oc
  Dispersion a_;
  GaussianData f_, g_;
  std::function<double(const Vec&)> chi_;
};

// Output frequencies, profile values and summation weights on a lattice.
struct LatticeProfile {
  double t = 0.0;
  double d_eta = 0.0, d_xi = 0.0;
  std::vector<Vec> xi;
  std::vector<cplx> h;
  std::vector<char> mirrored;  // xi_2 > 0 stands for (xi_1, -xi_2) as well
  double pairs = 0.0;
};

struct LatticeSetup {
  PhaseTriple triple;
  std::function<double(const Vec&)> f, g;  // real data
  Vec f_center, g_center;
  double data_radius = 1.0;  // f, g vanish (below threshold) beyond this distance from their centers
  SeparatedForm symbol;      // m(eta + zeta, eta) = outer(xi) sum_k p_k(eta) q_k(zeta)
  Vec xi_center;
  double xi_radius = 1.0;
  bool mirror = false;       // data and symbol symmetric under xi_2 -> -xi_2, centers on the xi_1 axis
  double grid_factor_eta = 2.5, grid_factor_xi = 2.5, grid_offset = 30.0;
  double max_step = 0.02;
  double amp_threshold = 1e-6;  // relative to max |f|, |g|
};

// h(t, xi) = sum_eta m f(eta) g(xi - eta) (e^{i t phi} - 1)/(i phi) deta^2 on
// aligned lattices whose spacing shrinks like 2 pi / (G t + B); d = 2 only.
class LatticeInteraction {
 public:
  explicit LatticeInteraction(LatticeSetup setup);
  LatticeProfile profile(double t) const;
  // u(t, x) = (2 pi)^{-1} sum e^{i x xi} e^{i t a(xi)} h(t, xi) dxi^2
  std::vector<cplx> evaluate(const LatticeProfile& p, const std::vector<Vec>& x) const;
  const LatticeSetup& setup() const { return s_; }

 private:
  LatticeSetup s_;
};

}  // namespace rlab
