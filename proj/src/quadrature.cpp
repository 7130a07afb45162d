#include "rlab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace rlab {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Piece {
  cplx value;
  double error, l1;
};

Piece gk(const std::function<cplx(double)>& f, double a, double b) {
  Piece p{};
  p.value = GK::integrate(f, a, b, 0, 0.0, &p.error, &p.l1);
  return p;
}

// Bisects until the error estimate meets abs_tol or stops shrinking; the
// latter means it is dominated by rounding in f.
void refine(const std::function<cplx(double)>& f, double a, double b, const Piece& whole, double abs_tol,
            unsigned depth, QuadResult& r) {
  if (whole.error <= abs_tol || depth == 0) {
    r.value += whole.value;
    r.error += whole.error;
    ++r.panels;
    return;
  }
  const double mid = 0.5 * (a + b);
  const Piece left = gk(f, a, mid), right = gk(f, mid, b);
  if (left.error + right.error >= 0.5 * whole.error) {
    r.value += left.value + right.value;
    r.error += left.error + right.error;
    r.panels += 2;
    return;
  }
  refine(f, a, mid, left, 0.5 * abs_tol, depth - 1, r);
  refine(f, mid, b, right, 0.5 * abs_tol, depth - 1, r);
}

}  // namespace

QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, const QuadOptions& opt) {
  QuadResult r;
  if (a == b) return r;
  const Piece whole = gk(f, a, b);
  refine(f, a, b, whole, opt.tol * whole.l1, opt.max_depth, r);
  return r;
}

QuadResult integrate_oscillatory(const std::function<cplx(double)>& f, const std::function<double(double)>& omega,
                                 double a, double b, const QuadOptions& opt) {
  QuadResult r;
  if (a == b) return r;
  const double dir = b > a ? 1.0 : -1.0;
  double x = a;
  // Kahan-style compensation keeps long panel sums stable
  cplx sum = 0.0, comp = 0.0;
  while (dir * (b - x) > 0) {
    double h = kPi / (std::abs(omega(x)) + 1.0);
    // re-evaluate at the tentative right end so growing frequencies are not overstepped
    h = std::min(h, kPi / (std::abs(omega(x + dir * h)) + 1.0));
    double xn = x + dir * h;
    if (dir * (xn - b) > 0 || dir * (b - xn) < 1e-3 * h) xn = b;
    const QuadResult p = integrate(f, x, xn, opt);
    const cplx y = p.value - comp;
    const cplx s = sum + y;
    comp = (s - sum) - y;
    sum = s;
    r.error += p.error;
    ++r.panels;
    x = xn;
  }
  r.value = sum;
  return r;
}

}  // namespace rlab
