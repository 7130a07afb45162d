#include "rlab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rlab {

namespace {

// 6th-order central differences; steps near the roundoff optimum.
double fd1(const std::function<double(double)>& f, double s) {
  double h = 6e-3 * std::max(1.0, s);
  h = std::min(h, s / 4.0);
  return (-f(s - 3 * h) + 9 * f(s - 2 * h) - 45 * f(s - h) + 45 * f(s + h) - 9 * f(s + 2 * h) +
          f(s + 3 * h)) /
         (60 * h);
}

double fd2(const std::function<double(double)>& f, double s) {
  double h = 1.2e-2 * std::max(1.0, s);
  h = std::min(h, s / 4.0);
  return (2 * f(s - 3 * h) - 27 * f(s - 2 * h) + 270 * f(s - h) - 490 * f(s) + 270 * f(s + h) -
          27 * f(s + 2 * h) + 2 * f(s + 3 * h)) /
         (180 * h * h);
}

}  // namespace

RadialProfile RadialProfile::power(double p, double coeff, double offset) {
  if (!(p > 0)) throw DomainError("power profile needs p > 0");
  RadialProfile r;
  r.kind_ = ProfileKind::Power;
  r.p_ = p;
  r.coeff_ = coeff;
  r.offset_ = offset;
  if (r.smooth_at_origin()) r.window_.lo = 0.0;
  return r;
}

RadialProfile RadialProfile::waterwave(double g, double sigma) {
  if (g < 0 || sigma < 0) throw DomainError("waterwave profile needs g >= 0 and sigma >= 0");
  if (g + sigma <= 0) throw DomainError("waterwave profile with g = sigma = 0 is identically zero");
  RadialProfile r;
  r.kind_ = ProfileKind::WaterWave;
  r.g_ = g;
  r.sigma_ = sigma;
  return r;
}

RadialProfile RadialProfile::klein_gordon(double mass) {
  if (!(mass > 0)) throw DomainError("Klein-Gordon profile needs mass > 0");
  RadialProfile r;
  r.kind_ = ProfileKind::KleinGordon;
  r.mass_ = mass;
  r.window_.lo = 0.0;
  return r;
}

RadialProfile RadialProfile::user(std::function<double(double)> tau, std::string label) {
  if (!tau) throw DomainError("user profile needs a callable");
  RadialProfile r;
  r.kind_ = ProfileKind::User;
  r.user_ = std::make_shared<const std::function<double(double)>>(std::move(tau));
  r.label_ = std::move(label);
  return r;
}

RadialProfile waterwave_profile(double g, double sigma) { return RadialProfile::waterwave(g, sigma); }

RadialProfile RadialProfile::negated() const {
  RadialProfile r = *this;
  r.sign_ = -sign_;
  return r;
}

RadialProfile RadialProfile::with_window(Window w) const {
  if (!(w.lo >= 0 && w.hi > w.lo)) throw DomainError("invalid evaluation window");
  RadialProfile r = *this;
  r.window_ = w;
  return r;
}

bool RadialProfile::smooth_at_origin() const {
  switch (kind_) {
    case ProfileKind::KleinGordon:
      return true;
    case ProfileKind::Power:
      return p_ >= 2.0 && std::floor(p_ / 2) * 2 == p_;
    default:
      return false;
  }
}

void RadialProfile::check_window(double s) const {
  if (s == 0.0 && smooth_at_origin()) return;
  if (!(s >= window_.lo && s <= window_.hi) || s <= 0.0) {
    std::ostringstream os;
    os << "radius " << s << " outside evaluation window [" << window_.lo << ", " << window_.hi
       << "] of " << describe();
    throw DomainError(os.str());
  }
}

double RadialProfile::raw_value(double s) const {
  switch (kind_) {
    case ProfileKind::Power:
      return coeff_ * std::pow(s, p_) + offset_;
    case ProfileKind::WaterWave:
      return std::sqrt(g_ * s + sigma_ * s * s * s);
    case ProfileKind::KleinGordon:
      return std::sqrt(mass_ * mass_ + s * s);
    case ProfileKind::User:
      return (*user_)(s);
  }
  return 0.0;
}

double RadialProfile::raw_d1(double s) const {
  switch (kind_) {
    case ProfileKind::Power:
      if (s == 0.0) return p_ > 1 ? 0.0 : (p_ == 1 ? coeff_ : INFINITY);
      return coeff_ * p_ * std::pow(s, p_ - 1);
    case ProfileKind::WaterWave:
      return (g_ + 3 * sigma_ * s * s) / (2 * std::sqrt(g_ * s + sigma_ * s * s * s));
    case ProfileKind::KleinGordon:
      return s / std::sqrt(mass_ * mass_ + s * s);
    case ProfileKind::User:
      return fd1(*user_, s);
  }
  return 0.0;
}

double RadialProfile::raw_d2(double s) const {
  switch (kind_) {
    case ProfileKind::Power:
      if (s == 0.0 && p_ == 2.0) return 2 * coeff_;
      return coeff_ * p_ * (p_ - 1) * std::pow(s, p_ - 2);
    case ProfileKind::WaterWave: {
      double q = g_ * s + sigma_ * s * s * s;
      return (1.5 * sigma_ * sigma_ * s * s * s * s + 3 * g_ * sigma_ * s * s - 0.5 * g_ * g_) /
             (2 * q * std::sqrt(q));
    }
    case ProfileKind::KleinGordon: {
      double q = mass_ * mass_ + s * s;
      return mass_ * mass_ / (q * std::sqrt(q));
    }
    case ProfileKind::User:
      return fd2(*user_, s);
  }
  return 0.0;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  if (sign_ < 0) os << "-";
  switch (kind_) {
    case ProfileKind::Power:
      os << "power(p=" << p_ << ", c=" << coeff_ << ", offset=" << offset_ << ")";
      break;
    case ProfileKind::WaterWave:
      os << "waterwave(g=" << g_ << ", sigma=" << sigma_ << ")";
      break;
    case ProfileKind::KleinGordon:
      os << "kleingordon(mass=" << mass_ << ")";
      break;
    case ProfileKind::User:
      os << "user(" << label_ << ")";
      break;
  }
  return os.str();
}

Mat radial_hessian(const RadialProfile& profile, const Vec& xi) {
  const double r = xi.norm();
  if (r == 0.0) throw DomainError("radial_hessian at xi = 0");
  profile.check_window(r);
  const double t1 = profile.d1(r), t2 = profile.d2(r);
  if (!std::isfinite(t1) || !std::isfinite(t2)) throw DomainError("profile not twice differentiable at |xi|");
  Mat h = (t2 / (r * r) - t1 / (r * r * r)) * (xi * xi.transpose());
  h.diagonal().array() += t1 / r;
  return h;
}

NondegeneracyReport hessian_nondegenerate(const RadialProfile& profile, double s, double tol) {
  if (!(s > 0)) throw DomainError("hessian_nondegenerate needs s > 0");
  const double t1 = std::abs(profile.d1(s)), t2 = std::abs(profile.d2(s));
  const double scale = std::max(1.0, t1 + t2);
  return {t1 > tol * scale && t2 > tol * scale, std::min(t1, t2)};
}

Dispersion Dispersion::radial(int d, RadialProfile profile) {
  if (d != 2 && d != 3) throw DomainError("dimension must be 2 or 3");
  Dispersion D;
  D.dim_ = d;
  D.radial_ = std::make_shared<const RadialProfile>(std::move(profile));
  return D;
}

Dispersion Dispersion::generic(int d, ValueFn value, GradFn grad, HessFn hess) {
  if (d != 2 && d != 3) throw DomainError("dimension must be 2 or 3");
  if (!value || !grad || !hess) throw DomainError("generic dispersion needs value, gradient and Hessian");
  Dispersion D;
  D.dim_ = d;
  D.value_ = std::make_shared<const ValueFn>(std::move(value));
  D.grad_ = std::make_shared<const GradFn>(std::move(grad));
  D.hess_ = std::make_shared<const HessFn>(std::move(hess));
  return D;
}

const RadialProfile& Dispersion::profile() const {
  if (!radial_) throw Unsupported("dispersion is not radial");
  return *radial_;
}

double Dispersion::value(const Vec& xi) const {
  if (radial_) return radial_->value(xi.norm());
  return sign_ * (*value_)(xi);
}

Vec Dispersion::gradient(const Vec& xi) const {
  if (radial_) {
    const double r = xi.norm();
    if (r == 0.0) {
      if (radial_->smooth_at_origin()) return Vec::Zero(xi.size());
      throw DomainError("gradient of a radial relation at xi = 0");
    }
    return (radial_->d1(r) / r) * xi;
  }
  return sign_ * (*grad_)(xi);
}

Mat Dispersion::hessian(const Vec& xi) const {
  if (radial_) {
    const double r = xi.norm();
    if (r == 0.0) {
      if (radial_->smooth_at_origin()) return radial_->d2(0.0) * Mat::Identity(xi.size(), xi.size());
      throw DomainError("Hessian of a radial relation at xi = 0");
    }
    const double t1 = radial_->d1(r), t2 = radial_->d2(r);
    Mat h = (t2 / (r * r) - t1 / (r * r * r)) * (xi * xi.transpose());
    h.diagonal().array() += t1 / r;
    return h;
  }
  return sign_ * (*hess_)(xi);
}

void Dispersion::check_point(const Vec& xi) const {
  if (xi.size() != dim_) throw DomainError("point dimension does not match dispersion");
  if (radial_) radial_->check_window(xi.norm());
}

Dispersion Dispersion::negated() const {
  Dispersion D = *this;
  if (radial_) {
    D.radial_ = std::make_shared<const RadialProfile>(radial_->negated());
  } else {
    D.sign_ = -sign_;
  }
  return D;
}

}  // namespace rlab
