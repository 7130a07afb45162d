#pragma once

#include "rlab/dispersion.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace rlab {

// phi(xi, eta) = -a(xi) + b(eta) + c(xi - eta)
struct PhaseTriple {
  Dispersion a, b, c;

  PhaseTriple(Dispersion a_, Dispersion b_, Dispersion c_);
  int dim() const { return a.dim(); }
  bool is_radial() const { return a.is_radial() && b.is_radial() && c.is_radial(); }

  double phi(const Vec& xi, const Vec& eta) const;
  Vec grad_xi(const Vec& xi, const Vec& eta) const;
  Vec grad_eta(const Vec& xi, const Vec& eta) const;
  Mat hess_eta(const Vec& xi, const Vec& eta) const;
  Mat hess_xi(const Vec& xi, const Vec& eta) const;
  Mat hess_xi_eta(const Vec& xi, const Vec& eta) const;  // d^2 phi / dxi deta
  // |(grad_xi, grad_eta)|
  double full_grad_norm(const Vec& xi, const Vec& eta) const;
};

enum class PhaseQuantity { Value, GradXi, GradEta, HessEta, HessXi, HessXiEta };

// Window-checked evaluation. Value comes back as a 1x1 matrix, gradients as
// d x 1, Hessians as d x d.
Mat phase_eval(const PhaseTriple& triple, const Vec& xi, const Vec& eta, PhaseQuantity what);

struct ResonancePoint {
  double R = 0.0;
  double lambda = 0.0;
  Vec xi, eta;              // R e1, lambda R e1
  double residual_phi = 0;  // |phi|
  double residual_grad = 0; // |grad_eta phi| (full vector)
};

struct ResonanceSearch {
  double R_lo = 0.1, R_hi = 10.0;
  double lambda_lo = -3.0, lambda_hi = 3.0;
  int grid = 64;
  int max_iter = 50;
  double step_tol = 1e-12;
  double residual_tol = 1e-10;
  double dedup_tol = 1e-6;
};

std::vector<ResonancePoint> find_radial_resonances(const PhaseTriple& triple, const ResonanceSearch& opts = {});

// Radius with the same tau' on the other side of the inflection point.
double conjugate_alpha(const RadialProfile& profile, double lambda);
// Unique zero of tau'' for concave-convex profiles.
double inflection_radius(const RadialProfile& profile);

// Left-hand sides of (invert1)..(invert4) for signed radial profiles.
std::array<double, 4> invert_conditions(const RadialProfile& a0, const RadialProfile& b0, const RadialProfile& c0,
                                        double R, double lambda, double sigma);

enum class A3Method { RadialClosedForm, GenericDeterminant };

struct SigmaMargin {
  double sigma = 0.0;
  bool block_ok = false;  // Hess_(xi,eta) psi (reduced by sigma^d) non-degenerate
  bool xi_ok = false;     // Hess_xi psi non-degenerate
  double block_margin = 0.0, xi_margin = 0.0;
};

struct AssumptionReport {
  bool pingouin = false;
  double pingouin_margin = 0.0;
  bool A1 = false;
  double A1_margin = 0.0;  // |det Hess_eta phi|
  bool A2 = false;
  double A2_margin = 0.0;  // |grad_xi phi|
  bool A3 = false;
  double A3_margin = 0.0;  // min over sigma of the best condition margin
  std::vector<SigmaMargin> A3_samples;
  std::optional<bool> pivert;  // empty when Hess a is singular ("undefined")
  double pivert_margin = 0.0;
  A3Method method = A3Method::RadialClosedForm;
  bool all_pass() const { return pingouin && A1 && A2 && A3 && pivert.value_or(false); }
};

AssumptionReport check_assumptions(const PhaseTriple& triple, const ResonancePoint& pt, int sigma_grid = 101,
                                   double tol = 1e-9, std::optional<A3Method> force = std::nullopt);

std::string to_string(A3Method m);

}  // namespace rlab
