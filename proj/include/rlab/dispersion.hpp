#pragma once

#include "rlab/common.hpp"

#include <functional>
#include <memory>
#include <string>

namespace rlab {

enum class ProfileKind { Power, WaterWave, KleinGordon, User };

struct Window {
  double lo = 1e-4;
  double hi = 1e3;
};

// Radial profile s -> tau(s) with first and second derivatives. A profile
// carries a sign flag so that -tau is represented without a new kind.
class RadialProfile {
 public:
  // c * s^p + offset
  static RadialProfile power(double p, double coeff = 1.0, double offset = 0.0);
  // sqrt(g s + sigma s^3)
  static RadialProfile waterwave(double g, double sigma);
  // sqrt(mass^2 + s^2)
  static RadialProfile klein_gordon(double mass = 1.0);
  // tau only; derivatives by 6th-order central differences
  static RadialProfile user(std::function<double(double)> tau, std::string label = "user");

  ProfileKind kind() const { return kind_; }
  int sign() const { return sign_; }
  const Window& window() const { return window_; }
  RadialProfile negated() const;
  RadialProfile with_window(Window w) const;

  // Signed evaluations; no window check (hot paths call these).
  double value(double s) const { return sign_ * raw_value(s); }
  double d1(double s) const { return sign_ * raw_d1(s); }
  double d2(double s) const { return sign_ * raw_d2(s); }

  // Throws DomainError when s leaves the evaluation window.
  void check_window(double s) const;
  // True when s = 0 is a smooth point (tau'(0) = 0, even profile).
  bool smooth_at_origin() const;

  double p() const { return p_; }
  double coeff() const { return coeff_; }
  double offset() const { return offset_; }
  double g() const { return g_; }
  double sigma() const { return sigma_; }
  double mass() const { return mass_; }
  std::string describe() const;

 private:
  double raw_value(double s) const;
  double raw_d1(double s) const;
  double raw_d2(double s) const;

  ProfileKind kind_ = ProfileKind::Power;
  int sign_ = 1;
  Window window_{};
  double p_ = 2.0, coeff_ = 1.0, offset_ = 0.0;
  double g_ = 0.0, sigma_ = 0.0, mass_ = 1.0;
  std::shared_ptr<const std::function<double(double)>> user_;
  std::string label_;
};

RadialProfile waterwave_profile(double g, double sigma);

// Hess[tau(|.|)](xi) = (tau''/|xi|^2 - tau'/|xi|^3) xi xi^T + (tau'/|xi|) I
Mat radial_hessian(const RadialProfile& profile, const Vec& xi);

struct NondegeneracyReport {
  bool flag = false;
  double margin = 0.0;  // min(|tau'|, |tau''|)
};

// Radial Hessian non-degenerate iff tau'(s) != 0 and tau''(s) != 0; "nonzero"
// means above tol * max(1, |tau'| + |tau''|).
NondegeneracyReport hessian_nondegenerate(const RadialProfile& profile, double s, double tol = 1e-9);

// A dispersion relation on R^d: radial (profile of |xi|) or generic callables.
class Dispersion {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessFn = std::function<Mat(const Vec&)>;

  static Dispersion radial(int d, RadialProfile profile);
  static Dispersion generic(int d, ValueFn value, GradFn grad, HessFn hess);

  int dim() const { return dim_; }
  bool is_radial() const { return radial_ != nullptr; }
  const RadialProfile& profile() const;

  double value(const Vec& xi) const;
  Vec gradient(const Vec& xi) const;
  Mat hessian(const Vec& xi) const;
  // Window check on |xi| for radial relations; no-op for generic ones.
  void check_point(const Vec& xi) const;
  Dispersion negated() const;

 private:
  int dim_ = 2;
  std::shared_ptr<const RadialProfile> radial_;
  std::shared_ptr<const ValueFn> value_;
  std::shared_ptr<const GradFn> grad_;
  std::shared_ptr<const HessFn> hess_;
  int sign_ = 1;  // generic relations only
};

}  // namespace rlab
