#include "rlab/resonance.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace rlab {

PhaseTriple::PhaseTriple(Dispersion a_, Dispersion b_, Dispersion c_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
  if (a.dim() != b.dim() || a.dim() != c.dim()) throw DomainError("phase triple dimensions differ");
}

double PhaseTriple::phi(const Vec& xi, const Vec& eta) const {
  return -a.value(xi) + b.value(eta) + c.value(xi - eta);
}

Vec PhaseTriple::grad_xi(const Vec& xi, const Vec& eta) const {
  return -a.gradient(xi) + c.gradient(xi - eta);
}

Vec PhaseTriple::grad_eta(const Vec& xi, const Vec& eta) const {
  return b.gradient(eta) - c.gradient(xi - eta);
}

Mat PhaseTriple::hess_eta(const Vec& xi, const Vec& eta) const {
  return b.hessian(eta) + c.hessian(xi - eta);
}

Mat PhaseTriple::hess_xi(const Vec& xi, const Vec& eta) const {
  return -a.hessian(xi) + c.hessian(xi - eta);
}

Mat PhaseTriple::hess_xi_eta(const Vec& xi, const Vec& eta) const { return -c.hessian(xi - eta); }

double PhaseTriple::full_grad_norm(const Vec& xi, const Vec& eta) const {
  return std::sqrt(grad_xi(xi, eta).squaredNorm() + grad_eta(xi, eta).squaredNorm());
}

Mat phase_eval(const PhaseTriple& triple, const Vec& xi, const Vec& eta, PhaseQuantity what) {
  triple.a.check_point(xi);
  triple.b.check_point(eta);
  triple.c.check_point(xi - eta);
  switch (what) {
    case PhaseQuantity::Value:
      return Mat::Constant(1, 1, triple.phi(xi, eta));
    case PhaseQuantity::GradXi:
      return triple.grad_xi(xi, eta);
    case PhaseQuantity::GradEta:
      return triple.grad_eta(xi, eta);
    case PhaseQuantity::HessEta:
      return triple.hess_eta(xi, eta);
    case PhaseQuantity::HessXi:
      return triple.hess_xi(xi, eta);
    case PhaseQuantity::HessXiEta:
      return triple.hess_xi_eta(xi, eta);
  }
  return {};
}

namespace {

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

// Reduced radial system on xi = R e1, eta = lambda R e1.
struct Reduced {
  const RadialProfile &a0, &b0, &c0;
  Eigen::Vector2d eval(double R, double lam) const {
    const double rb = std::abs(lam) * R, rc = std::abs(1 - lam) * R;
    b0.check_window(rb);
    c0.check_window(rc);
    a0.check_window(R);
    return {-a0.value(R) + b0.value(rb) + c0.value(rc), sgn(lam) * b0.d1(rb) - sgn(1 - lam) * c0.d1(rc)};
  }
};

Vec e1_scaled(int d, double s) {
  Vec v = Vec::Zero(d);
  v(0) = s;
  return v;
}

}  // namespace

std::vector<ResonancePoint> find_radial_resonances(const PhaseTriple& triple, const ResonanceSearch& o) {
  if (!triple.is_radial()) throw Unsupported("find_radial_resonances needs a radial triple");
  if (!(o.R_lo > 0 && o.R_hi > o.R_lo && o.lambda_hi > o.lambda_lo && o.grid >= 2))
    throw DomainError("invalid resonance search ranges");
  const Reduced sys{triple.a.profile(), triple.b.profile(), triple.c.profile()};
  const int d = triple.dim();

  std::vector<Eigen::Vector2d> roots;
  for (int i = 0; i < o.grid; ++i) {
    for (int j = 0; j < o.grid; ++j) {
      double R = o.R_lo + (o.R_hi - o.R_lo) * (i + 0.5) / o.grid;
      double lam = o.lambda_lo + (o.lambda_hi - o.lambda_lo) * (j + 0.5) / o.grid;
      bool ok = false;
      try {
        for (int it = 0; it < o.max_iter; ++it) {
          const Eigen::Vector2d F = sys.eval(R, lam);
          const double hR = 1e-7 * std::max(1.0, R), hL = 1e-7 * std::max(1.0, std::abs(lam));
          Eigen::Matrix2d J;
          J.col(0) = (sys.eval(R + hR, lam) - sys.eval(R - hR, lam)) / (2 * hR);
          J.col(1) = (sys.eval(R, lam + hL) - sys.eval(R, lam - hL)) / (2 * hL);
          const double det = J.determinant();
          if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
          Eigen::Vector2d step = J.partialPivLu().solve(-F);
          // damp wild steps so the iterate stays near the seed box
          const double span = std::max(o.R_hi - o.R_lo, o.lambda_hi - o.lambda_lo);
          if (step.norm() > span) step *= span / step.norm();
          R += step(0);
          lam += step(1);
          if (!(R > 0) || !std::isfinite(lam)) break;
          if (step.norm() < o.step_tol * std::max(1.0, std::hypot(R, lam))) {
            ok = true;
            break;
          }
        }
        if (ok) {
          const Eigen::Vector2d F = sys.eval(R, lam);
          ok = F.cwiseAbs().maxCoeff() <= o.residual_tol;
        }
      } catch (const DomainError&) {
        ok = false;
      }
      if (!ok) continue;
      if (R < o.R_lo || R > o.R_hi || lam < o.lambda_lo || lam > o.lambda_hi) continue;
      if (std::abs(lam) < 1e-8 || std::abs(1 - lam) < 1e-8) continue;
      const bool dup = std::any_of(roots.begin(), roots.end(), [&](const Eigen::Vector2d& r) {
        return std::abs(r(0) - R) < o.dedup_tol && std::abs(r(1) - lam) < o.dedup_tol;
      });
      if (!dup) roots.emplace_back(R, lam);
    }
  }
  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    return x(0) != y(0) ? x(0) < y(0) : x(1) < y(1);
  });

  std::vector<ResonancePoint> out;
  for (const auto& r : roots) {
    ResonancePoint p;
    p.R = r(0);
    p.lambda = r(1);
    p.xi = e1_scaled(d, p.R);
    p.eta = e1_scaled(d, p.lambda * p.R);
    p.residual_phi = std::abs(phase_eval(triple, p.xi, p.eta, PhaseQuantity::Value)(0, 0));
    // full gradient vector: the transverse part vanishes by colinearity
    p.residual_grad = phase_eval(triple, p.xi, p.eta, PhaseQuantity::GradEta).norm();
    if (p.residual_phi <= o.residual_tol && p.residual_grad <= o.residual_tol) out.push_back(std::move(p));
  }
  return out;
}

double inflection_radius(const RadialProfile& profile) {
  if (profile.kind() == ProfileKind::WaterWave) {
    if (profile.g() > 0 && profile.sigma() > 0)
      return std::sqrt((2 * std::sqrt(3.0) - 3) / 3 * profile.g() / profile.sigma());
    throw Unsupported("water-wave profile without surface tension or gravity has no inflection");
  }
  // log-spaced sign scan of tau'' over the window
  const double lo = std::max(profile.window().lo, 1e-8), hi = profile.window().hi;
  const int n = 4000;
  double prev_s = lo, prev = profile.d2(lo);
  int changes = 0;
  double a = 0, b = 0;
  for (int i = 1; i <= n; ++i) {
    const double s = lo * std::pow(hi / lo, double(i) / n);
    const double v = profile.d2(s);
    if (sgn(v) != sgn(prev) && sgn(v) != 0 && sgn(prev) != 0) {
      ++changes;
      a = prev_s;
      b = s;
    }
    prev = v;
    prev_s = s;
  }
  if (changes != 1) throw Unsupported("profile has no unique inflection radius");
  double fa = profile.d2(a);
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double m = 0.5 * (a + b), fm = profile.d2(m);
    if (sgn(fm) == sgn(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double conjugate_alpha(const RadialProfile& profile, double lambda) {
  if (!(lambda > 0)) throw DomainError("conjugate_alpha needs lambda > 0");
  const double l0 = inflection_radius(profile);
  if (lambda == l0) return l0;
  // Work with |tau'| so that a negated profile behaves identically.
  auto dp = [&](double s) { return profile.sign() * profile.d1(s); };
  const double target = dp(lambda);
  double a, b;
  if (lambda < l0) {
    a = l0;
    b = 2 * l0;
    while (dp(b) < target) {
      b *= 2;
      if (b > 1e15) throw DomainError("no conjugate radius found");
    }
  } else {
    a = l0 / 2;
    b = l0;
    while (dp(a) < target) {
      a /= 2;
      if (a < 1e-300) throw DomainError("no conjugate radius found");
    }
  }
  // tau' - target changes sign on [a, b]; monotone branch
  double fa = dp(a) - target;
  for (int it = 0; it < 400; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = dp(m) - target;
    if (sgn(fm) == sgn(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

std::array<double, 4> invert_conditions(const RadialProfile& a0, const RadialProfile& b0, const RadialProfile& c0,
                                        double R, double lambda, double sigma) {
  if (!(R > 0)) throw DomainError("invert_conditions needs R > 0");
  if (lambda == 0.0 || lambda == 1.0) throw DomainError("invert_conditions needs lambda not in {0, 1}");
  const double rb = std::abs(lambda) * R, rc = std::abs(1 - lambda) * R;
  a0.check_window(R);
  b0.check_window(rb);
  c0.check_window(rc);
  const double a2 = a0.d2(R), b2 = b0.d2(rb), c2 = c0.d2(rc);
  const double a1 = a0.d1(R), b1 = b0.d1(rb), c1 = c0.d1(rc);
  const double al = std::abs(lambda), bl = std::abs(1 - lambda);
  return {(1 - sigma) * a2 * (b2 + c2) + sigma * b2 * c2,
          (1 - sigma) * a1 * (bl * b1 + al * c1) + sigma * b1 * c1,
          (1 - sigma) * a2 + sigma * c2,
          (1 - sigma) * bl * a1 + sigma * c1};
}

std::string to_string(A3Method m) {
  return m == A3Method::RadialClosedForm ? "radial-closed-form" : "generic-determinant";
}

namespace {

// Relative conditioning of a square matrix: smallest over largest singular value.
double rel_margin(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  if (smax == 0.0) return 0.0;
  return s(s.size() - 1) / smax;
}

double min_abs_eig(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

// |x| relative to the size of its terms
double rel(double x, double scale) { return std::abs(x) / std::max(scale, 1e-300); }

}  // namespace

AssumptionReport check_assumptions(const PhaseTriple& triple, const ResonancePoint& pt, int sigma_grid, double tol,
                                   std::optional<A3Method> force) {
  if (sigma_grid < 2) throw DomainError("sigma grid needs at least two points");
  const Vec& xi = pt.xi;
  const Vec& eta = pt.eta;
  const Vec zeta = xi - eta;
  const int d = triple.dim();
  phase_eval(triple, xi, eta, PhaseQuantity::Value);  // window checks

  AssumptionReport rep;
  rep.method = force.value_or(triple.is_radial() ? A3Method::RadialClosedForm : A3Method::GenericDeterminant);
  if (rep.method == A3Method::RadialClosedForm && !triple.is_radial())
    throw Unsupported("radial A3 path needs a radial triple");

  const Mat Ha = triple.a.hessian(xi), Hb = triple.b.hessian(eta), Hc = triple.c.hessian(zeta);

  // (pingouin)
  if (triple.is_radial()) {
    const auto ra = hessian_nondegenerate(triple.a.profile(), xi.norm(), tol);
    const auto rb = hessian_nondegenerate(triple.b.profile(), eta.norm(), tol);
    const auto rc = hessian_nondegenerate(triple.c.profile(), zeta.norm(), tol);
    rep.pingouin = ra.flag && rb.flag && rc.flag;
    rep.pingouin_margin = std::min({ra.margin, rb.margin, rc.margin});
  } else {
    rep.pingouin_margin = std::min({min_abs_eig(Ha), min_abs_eig(Hb), min_abs_eig(Hc)});
    rep.pingouin = rep.pingouin_margin > tol;
  }

  rep.A1_margin = std::abs(triple.hess_eta(xi, eta).determinant());
  rep.A1 = rep.A1_margin > tol;
  const Vec gx = triple.grad_xi(xi, eta);
  rep.A2_margin = gx.norm();
  rep.A2 = rep.A2_margin > tol;

  Eigen::SelfAdjointEigenSolver<Mat> esa(Ha, Eigen::EigenvaluesOnly);
  const Vec ev = esa.eigenvalues();
  if (ev.cwiseAbs().minCoeff() > tol * std::max(1.0, ev.cwiseAbs().maxCoeff())) {
    rep.pivert_margin = std::abs(gx.dot(Ha.ldlt().solve(gx)));
    rep.pivert = rep.pivert_margin > tol;
  }

  rep.A3 = true;
  rep.A3_margin = INFINITY;
  for (int k = 0; k < sigma_grid; ++k) {
    const double s = double(k) / (sigma_grid - 1);
    SigmaMargin sm;
    sm.sigma = s;
    if (rep.method == A3Method::RadialClosedForm) {
      const auto& a0 = triple.a.profile();
      const auto& b0 = triple.b.profile();
      const auto& c0 = triple.c.profile();
      const auto inv = invert_conditions(a0, b0, c0, pt.R, pt.lambda, s);
      const double rb = std::abs(pt.lambda) * pt.R, rc = std::abs(1 - pt.lambda) * pt.R;
      const double a2 = a0.d2(pt.R), b2 = b0.d2(rb), c2 = c0.d2(rc);
      const double a1 = a0.d1(pt.R), b1 = b0.d1(rb), c1 = c0.d1(rc);
      const double al = std::abs(pt.lambda), bl = std::abs(1 - pt.lambda);
      const double m1 = rel(inv[0], (1 - s) * std::abs(a2) * (std::abs(b2) + std::abs(c2)) + s * std::abs(b2 * c2));
      const double m2 = rel(inv[1], (1 - s) * std::abs(a1) * (bl * std::abs(b1) + al * std::abs(c1)) + s * std::abs(b1 * c1));
      const double m3 = rel(inv[2], (1 - s) * std::abs(a2) + s * std::abs(c2));
      const double m4 = rel(inv[3], (1 - s) * bl * std::abs(a1) + s * std::abs(c1));
      sm.block_margin = std::min(m1, m2);
      sm.xi_margin = std::min(m3, m4);
    } else {
      // det Hess_(xi,eta) psi = sigma^d det of this block (column reduction)
      Mat B(2 * d, 2 * d);
      B << (1 - s) * Ha, -Hc, s * Hb, Hb + Hc;
      sm.block_margin = rel_margin(B);
      sm.xi_margin = rel_margin((1 - s) * Ha + s * Hc);
    }
    sm.block_ok = sm.block_margin > tol;
    sm.xi_ok = sm.xi_margin > tol;
    const double best = std::max(sm.block_ok ? sm.block_margin : 0.0, sm.xi_ok ? sm.xi_margin : 0.0);
    if (!sm.block_ok && !sm.xi_ok) rep.A3 = false;
    rep.A3_margin = std::min(rep.A3_margin, best);
    rep.A3_samples.push_back(sm);
  }
  return rep;
}

}  // namespace rlab
