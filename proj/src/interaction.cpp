#include "rlab/interaction.hpp"

#include "rlab/oscillatory.hpp"
#include "rlab/quadrature.hpp"

#include <cmath>

namespace rlab {

namespace {

constexpr cplx I(0.0, 1.0);

// int_Z^inf e^{i tau} tau^{-nu} dtau ~ e^{iZ} sum_k i (-i)^k (nu)_k Z^{-nu-k}
cplx K_asymptotic(double nu, double Z) {
  cplx sum = 0.0, c = I;
  double poch = 1.0, zp = std::pow(Z, nu);
  for (int k = 0; k < 14; ++k) {
    if (k > 0) {
      c *= -I;
      poch *= nu + k - 1;
      zp *= Z;
    }
    sum += c * poch / zp;
  }
  return std::exp(I * Z) * sum;
}

cplx K_nu(double nu, double Z) {
  if (Z >= 50.0) return K_asymptotic(nu, Z);
  const bool half = std::abs(nu - std::round(nu)) > 0.25;
  double v = half ? 0.5 : 1.0;
  cplx K = half ? std::sqrt(kPi) * std::exp(I * (kPi / 4)) - std::sqrt(Z) * model_Y(Z) : exp_integral_F(Z);
  // K_{v+1} = (Z^{-v} e^{iZ} + i K_v) / v
  while (v < nu - 0.25) {
    K = (std::pow(Z, -v) * std::exp(I * Z) + I * K) / v;
    v += 1.0;
  }
  return K;
}

void quadratic_parts(const Dispersion& D, const char* name, double& coeff, double& offset) {
  if (!D.is_radial() || D.profile().kind() != ProfileKind::Power || D.profile().p() != 2.0)
    throw Unsupported(std::string("closed-form interaction needs a quadratic profile for ") + name);
  const auto& P = D.profile();
  coeff = P.sign() * P.coeff();
  offset = P.sign() * P.offset();
}

}  // namespace

double GaussianData::operator()(const Vec& x) const {
  const Vec r = x - center;
  double v = amplitude * std::exp(-r.squaredNorm() / (2.0 * width * width));
  if (null_direction) v *= null_direction->dot(r);
  return v;
}

cplx oscillatory_tail(double nu, double S, double u) {
  if (!(S > 0)) throw DomainError("tail start must be positive");
  if (u == 0.0) {
    if (nu <= 1.0) throw DomainError("non-oscillating tail diverges for nu <= 1");
    return std::pow(S, 1.0 - nu) / (nu - 1.0);
  }
  const double au = std::abs(u);
  cplx K = K_nu(nu, S * au) * std::pow(au, nu - 1.0);
  return u > 0 ? K : std::conj(K);
}

GaussianInteraction::GaussianInteraction(const PhaseTriple& triple, GaussianData f, GaussianData g,
                                         std::function<double(const Vec&)> chi)
    : d_(triple.dim()), a_(triple.a), f_(std::move(f)), g_(std::move(g)), chi_(std::move(chi)) {
  double aa, oa;
  quadratic_parts(triple.a, "a", aa, oa);
  quadratic_parts(triple.b, "b", ab_, ob_);
  quadratic_parts(triple.c, "c", ac_, oc_);
  if (ab_ + ac_ == 0.0) throw DomainError("Hess_eta phi vanishes identically");
  if (f_.center.size() != d_ || g_.center.size() != d_) throw DomainError("data centers must match the dimension");
}

Vec GaussianInteraction::stationary_eta(const Vec& xi) const { return (ac_ / (ab_ + ac_)) * xi; }

double GaussianInteraction::resonance_function(const Vec& xi) const {
  Vec H = stationary_eta(xi);
  return -a_.value(xi) + ab_ * H.squaredNorm() + ob_ + ac_ * (xi - H).squaredNorm() + oc_;
}

double GaussianInteraction::amplitude_bound(const Vec& xi) const {
  const double chi = chi_ ? std::abs(chi_(xi)) : 1.0;
  const double wf2 = f_.width * f_.width, wg2 = g_.width * g_.width;
  double v = chi * std::abs(f_.amplitude * g_.amplitude) *
             std::exp(-(xi - f_.center - g_.center).squaredNorm() / (2.0 * (wf2 + wg2)));
  // linear factors are bounded by |v| times the combined spread
  const double spread = (xi - f_.center - g_.center).norm() + f_.width + g_.width + 1.0;
  if (f_.null_direction) v *= f_.null_direction->norm() * spread;
  if (g_.null_direction) v *= g_.null_direction->norm() * spread;
  return v;
}

cplx GaussianInteraction::integrand(const Vec& xi, double s) const {
  const double chi = chi_ ? chi_(xi) : 1.0;
  if (chi == 0.0) return 0.0;
  const double wf2 = f_.width * f_.width, wg2 = g_.width * g_.width;
  const double q = ab_ + ac_;
  const cplx p = 1.0 / wf2 + 1.0 / wg2 - 2.0 * I * s * q;
  const Vec zc = xi - g_.center;
  const Eigen::VectorXcd J = (f_.center / wf2 + zc / wg2).cast<cplx>() - (2.0 * I * s * ac_) * xi.cast<cplx>();
  const cplx C0 = -f_.center.squaredNorm() / (2.0 * wf2) - zc.squaredNorm() / (2.0 * wg2) +
                  I * s * (ac_ * xi.squaredNorm() - a_.value(xi) + ob_ + oc_);
  const cplx JJ = (J.transpose() * J)(0);
  cplx val = std::pow(2.0 * kPi / p, 0.5 * d_) * std::exp(C0 + JJ / (2.0 * p));
  if (f_.null_direction || g_.null_direction) {
    const Eigen::VectorXcd mu = J / p;
    cplx lf = 1.0, lg = 1.0;
    if (f_.null_direction) lf = (f_.null_direction->cast<cplx>().transpose() * (mu - f_.center.cast<cplx>()))(0);
    if (g_.null_direction) lg = (g_.null_direction->cast<cplx>().transpose() * (zc.cast<cplx>() - mu))(0);
    cplx poly = lf * lg;
    if (f_.null_direction && g_.null_direction) poly -= f_.null_direction->dot(*g_.null_direction) / p;
    val *= poly;
  }
  return chi * f_.amplitude * g_.amplitude * val;
}

GaussianInteraction::Series GaussianInteraction::series(const Vec& xi, const std::vector<double>& times,
                                                        double tail_start) const {
  Series out;
  out.h.reserve(times.size());
  const double u = resonance_function(xi);
  auto f = [&](double s) { return integrand(xi, s); };
  auto om = [&](double) { return std::abs(u) + 1.0; };
  QuadOptions qo;
  qo.tol = 1e-11;
  cplx acc = 0.0;
  double t0 = 0.0;
  for (double t : times) {
    if (t < t0) throw DomainError("series times must be increasing");
    if (t > t0) acc += integrate_oscillatory(f, om, t0, t, qo).value;
    out.h.push_back(acc);
    t0 = t;
  }
  const double S = std::max(tail_start, t0);
  if (S > t0) acc += integrate_oscillatory(f, om, t0, S, qo).value;

  // I(s) = e^{isu} s^{-d/2} (g0 + g1/s + g2/s^2 + ...), matched at S, 2S, 4S
  const double nu = 0.5 * d_;
  Eigen::Matrix3cd A;
  Eigen::Vector3cd rhs;
  for (int k = 0; k < 3; ++k) {
    const double s = S * std::pow(2.0, k);
    rhs(k) = integrand(xi, s) * std::exp(-I * (s * u)) * std::pow(s, nu);
    A(k, 0) = 1.0;
    A(k, 1) = 1.0 / s;
    A(k, 2) = 1.0 / (s * s);
  }
  const Eigen::Vector3cd gk = A.partialPivLu().solve(rhs);
  cplx tail = 0.0;
  for (int k = 0; k < 3; ++k) tail += gk(k) * oscillatory_tail(nu + k, S, u);
  out.h_inf = acc + tail;
  return out;
}

}  // namespace rlab
