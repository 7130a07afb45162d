#include "rlab/oscillatory.hpp"

#include "rlab/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rlab {

namespace {

constexpr cplx I(0.0, 1.0);
constexpr double kTailStart = 200.0;

// int_Z^inf e^{i tau}/tau dtau ~ e^{iZ} sum_k i (-i)^k k! / Z^{k+1}
cplx F_tail(double z, int terms = 8) {
  cplx sum = 0.0, c = I;
  double fact = 1.0, zp = z;
  for (int k = 0; k < terms; ++k) {
    if (k > 0) {
      c *= -I;
      fact *= k;
      zp *= z;
    }
    sum += c * fact / zp;
  }
  return std::exp(I * z) * sum;
}

}  // namespace

cplx exp_integral_F(double z) {
  if (!(z > 0)) throw DomainError("F(z) needs z > 0");
  if (z >= kTailStart) return F_tail(z);
  cplx v = 0.0;
  double lo = z;
  if (z < 1.0) {
    // tau = e^w removes the 1/tau endpoint behaviour
    v += integrate([](double w) { return std::exp(I * std::exp(w)); }, std::log(z), 0.0).value;
    lo = 1.0;
  }
  v += integrate_oscillatory([](double x) { return std::exp(I * x) / x; }, [](double) { return 1.0; }, lo,
                             kTailStart)
           .value;
  return v + F_tail(kTailStart);
}

cplx model_Z(double t, double u) {
  if (!(t > 1)) throw DomainError("Z(t, u) needs t > 1");
  // sigma = e^w
  auto f = [&](double w) { return std::exp(I * (t * u * std::exp(w))); };
  auto om = [&](double w) { return t * std::abs(u) * std::exp(w); };
  return integrate_oscillatory(f, om, -std::log(t), 0.0).value;
}

cplx model_Y(double u) {
  // sigma = v^2
  auto f = [&](double v) { return 2.0 * std::exp(I * (u * v * v)); };
  auto om = [&](double v) { return 2.0 * std::abs(u) * v; };
  return integrate_oscillatory(f, om, 0.0, 1.0).value;
}

ChardonneretResult chardonneret(const ScalarPhase& z, const Cutoff& chi, double t) {
  if (!(t >= 10)) throw DomainError("chardonneret needs t >= 10");
  if (!(chi.support_hi > 1.0 / t)) throw DomainError("cutoff support ends before 1/t");
  double cmin = INFINITY;
  for (int k = 0; k <= 200; ++k) cmin = std::min(cmin, z.d2zeta(chi.support_hi * k / 200.0));
  if (!(cmin > 0)) throw DomainError("chardonneret needs zeta'' > 0 on the cutoff support");

  ChardonneretResult r;
  double s0 = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double step = z.dzeta(s0) / z.d2zeta(s0);
    s0 -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(s0))) break;
  }
  r.sigma0 = s0;
  const double z0 = z.zeta(0.0);
  const double drop = std::max(0.0, z0 - z.zeta(s0));
  r.alpha = (s0 > 0 ? -1.0 : 1.0) * std::sqrt(drop);
  if (s0 == 0.0) r.alpha = 0.0;

  auto f = [&](double w) {
    const double s = std::exp(w);
    return std::exp(I * (t * z.zeta(s))) * chi.chi(s);
  };
  auto om = [&](double w) {
    const double s = std::exp(w);
    return t * std::abs(z.dzeta(s)) * s;
  };
  r.oracle = integrate_oscillatory(f, om, -std::log(t), std::log(chi.support_hi)).value;

  const double chi0 = chi.chi(0.0);
  const cplx ph = std::exp(I * (t * z0));
  const double dz0 = std::abs(z.dzeta(0.0));
  if (std::abs(r.alpha) * std::sqrt(t) <= 1.0) {
    r.regime = ColibriRegime::Log;
    // eps = |zeta'(0)| / (2 sqrt(zeta(0) - zeta(sigma0)) t), quadratic limit when the drop vanishes
    const double eps = drop > 1e-14 ? dz0 / (2 * std::sqrt(drop) * t) : std::sqrt(0.5 * z.d2zeta(s0)) / t;
    r.asymptotic = -chi0 * ph * std::log(std::sqrt(t) * eps);
  } else if (r.alpha > 0) {
    r.regime = ColibriRegime::Positive;
    r.asymptotic = chi0 * ph * exp_integral_F(dz0);  // 2 eps t alpha = |zeta'(0)|
  } else {
    r.regime = ColibriRegime::Negative;
    r.asymptotic = chi0 * ph * std::conj(exp_integral_F(dz0));
  }
  return r;
}

double psi(const PhaseTriple& triple, const Vec& xi, const Vec& eta, double sigma, const Vec& X) {
  return triple.a.value(xi) + sigma * triple.phi(xi, eta) + X.dot(xi);
}

std::optional<Vec> stationary_xi(const PhaseTriple& triple, const Vec& eta, double sigma, const Vec& X,
                                 const Vec& guess, const NewtonOptions& opt) {
  Vec xi = guess;
  try {
    for (int it = 0; it < opt.max_iter; ++it) {
      const Vec G = (1 - sigma) * triple.a.gradient(xi) + sigma * triple.c.gradient(xi - eta) + X;
      const Mat J = (1 - sigma) * triple.a.hessian(xi) + sigma * triple.c.hessian(xi - eta);
      const Vec step = J.partialPivLu().solve(-G);
      if (!step.allFinite()) return std::nullopt;
      xi += step;
      if (step.norm() <= opt.tol * std::max(1.0, xi.norm())) {
        const Vec res = (1 - sigma) * triple.a.gradient(xi) + sigma * triple.c.gradient(xi - eta) + X;
        if (res.norm() <= 1e-10 * std::max(1.0, X.norm())) return xi;
        return std::nullopt;
      }
    }
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

std::optional<StationaryPair> stationary_eta(const PhaseTriple& triple, double sigma, const Vec& X,
                                             const StationaryPair& guess, const NewtonOptions& opt) {
  const int d = triple.dim();
  Vec xi = guess.xi, eta = guess.eta;
  auto residual = [&](const Vec& x, const Vec& e) {
    Vec G(2 * d);
    G << (1 - sigma) * triple.a.gradient(x) + sigma * triple.c.gradient(x - e) + X, triple.grad_eta(x, e);
    return G;
  };
  try {
    for (int it = 0; it < opt.max_iter; ++it) {
      const Vec G = residual(xi, eta);
      const Mat Ha = triple.a.hessian(xi), Hb = triple.b.hessian(eta), Hc = triple.c.hessian(xi - eta);
      Mat J(2 * d, 2 * d);
      J << (1 - sigma) * Ha + sigma * Hc, -sigma * Hc, -Hc, Hb + Hc;
      const Vec step = J.partialPivLu().solve(-G);
      if (!step.allFinite()) return std::nullopt;
      xi += step.head(d);
      eta += step.tail(d);
      if (step.norm() <= opt.tol * std::max(1.0, std::hypot(xi.norm(), eta.norm()))) {
        if (residual(xi, eta).norm() <= 1e-10 * std::max(1.0, X.norm())) return StationaryPair{xi, eta};
        return std::nullopt;
      }
    }
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

PhasePath::PhasePath(PhaseTriple triple, Vec X, StationaryPair reference)
    : triple_(std::move(triple)), X_(std::move(X)) {
  auto s = stationary_eta(triple_, 0.0, X_, reference);
  if (!s) throw DomainError("no stationary pair at sigma = 0 near the reference point");
  ref_ = *s;
}

std::optional<StationaryPair> PhasePath::solve(double sigma) const {
  StationaryPair cur = ref_;
  const int n = std::max(1, int(std::ceil(std::abs(sigma) / 0.05)));
  for (int k = 1; k <= n; ++k) {
    auto s = stationary_eta(triple_, sigma * k / n, X_, cur);
    if (!s) return std::nullopt;
    cur = *s;
  }
  return cur;
}

StationaryPair PhasePath::at(double sigma) const {
  auto s = solve(sigma);
  if (!s) throw DomainError("stationary pair lost along the sigma continuation");
  return *s;
}

double PhasePath::zeta(double sigma) const {
  const auto s = at(sigma);
  return psi(triple_, s.xi, s.eta, sigma, X_);
}

double PhasePath::dzeta(double sigma) const {
  const auto s = at(sigma);
  return triple_.phi(s.xi, s.eta);
}

double PhasePath::d2zeta(double sigma) const {
  const auto s = at(sigma);
  const int d = triple_.dim();
  const Mat Ha = triple_.a.hessian(s.xi), Hb = triple_.b.hessian(s.eta), Hc = triple_.c.hessian(s.xi - s.eta);
  Mat J(2 * d, 2 * d);
  J << (1 - sigma) * Ha + sigma * Hc, -sigma * Hc, -Hc, Hb + Hc;
  const Vec gx = triple_.grad_xi(s.xi, s.eta);
  Vec rhs = Vec::Zero(2 * d);
  rhs.head(d) = -gx;
  const Vec dz = J.partialPivLu().solve(rhs);
  return gx.dot(dz.head(d));
}

std::optional<double> PhasePath::sigma0(double guess) const {
  double s = guess;
  try {
    for (int it = 0; it < 60; ++it) {
      const double step = dzeta(s) / d2zeta(s);
      if (!std::isfinite(step)) return std::nullopt;
      s -= step;
      if (std::abs(step) < 1e-14) return s;
    }
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

std::optional<double> PhasePath::alpha(double guess) const {
  auto s0 = sigma0(guess);
  if (!s0) return std::nullopt;
  const double v = std::sqrt(std::abs(zeta(0.0) - zeta(*s0)));
  return *s0 > 0 ? -v : v;
}

ScalarPhase PhasePath::as_scalar() const {
  return {[this](double s) { return zeta(s); }, [this](double s) { return dzeta(s); },
          [this](double s) { return d2zeta(s); }};
}

double epsilon0(const PhaseTriple& triple, const std::vector<std::pair<Vec, Vec>>& samples) {
  if (samples.empty()) throw DomainError("epsilon0 needs support samples");
  auto worst = [&](double s) {
    double m = INFINITY;
    for (const auto& [xi, eta] : samples) {
      const Mat H = (1 - s) * triple.a.hessian(xi) + s * triple.c.hessian(xi - eta);
      Eigen::SelfAdjointEigenSolver<Mat> es(H, Eigen::EigenvaluesOnly);
      m = std::min(m, es.eigenvalues().cwiseAbs().minCoeff());
    }
    return m;
  };
  const double m0 = worst(0.0);
  double eps = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double s = 0.005 * k;
    if (worst(s) < 0.5 * m0) break;
    eps = s;
  }
  return eps;
}

OutcomeChart::OutcomeChart(const PhaseTriple& triple, const ResonancePoint& pt) : triple_(triple), pt_(pt) {
  if (triple.dim() != 2) throw Unsupported("outcome chart is defined for d = 2 only");
  if (!triple.is_radial()) throw Unsupported("outcome chart needs a radial triple");
  const auto rep = check_assumptions(triple, pt);
  if (!rep.A1 || !rep.A2) throw DomainError("chart refused: (A1)/(A2) fail at the resonance");
  if (!rep.pivert || !*rep.pivert) throw DomainError("chart refused: the pivert quadratic form vanishes or is undefined");
}

namespace {
Vec rot(double s, const Vec& v) {
  Vec r(2);
  r << std::cos(s) * v(0) - std::sin(s) * v(1), std::sin(s) * v(0) + std::cos(s) * v(1);
  return r;
}
}  // namespace

Vec OutcomeChart::xi_bar(double s) const { return rot(s, pt_.xi); }
Vec OutcomeChart::eta_bar(double s) const { return rot(s, pt_.eta); }
Vec OutcomeChart::X_bar(double s) const { return -triple_.a.gradient(xi_bar(s)); }
Vec OutcomeChart::direction(double s) const { return triple_.grad_xi(xi_bar(s), eta_bar(s)); }
Vec OutcomeChart::forward(double s, double mu) const { return X_bar(s) + mu * direction(s); }

std::vector<Vec> OutcomeChart::sample(int n) const {
  std::vector<Vec> out;
  for (int k = 0; k < n; ++k) out.push_back(X_bar(2 * kPi * k / n));
  return out;
}

std::optional<std::pair<double, double>> OutcomeChart::inverse(const Vec& X, double mu_max) const {
  // projection onto the sampled family
  double best = INFINITY, s = 0, mu = 0;
  const int n = 720;
  for (int k = 0; k < n; ++k) {
    const double sk = 2 * kPi * k / n;
    const Vec D = direction(sk), R = X - X_bar(sk);
    const double m = R.dot(D) / D.squaredNorm();
    const double r = (R - m * D).norm();
    // the antipodal point also projects exactly when the direction is radial
    if (r < best && std::abs(m) <= 1.5 * mu_max) {
      best = r;
      s = sk;
      mu = m;
    }
  }
  for (int it = 0; it < 50; ++it) {
    const Vec F = forward(s, mu) - X;
    const double h = 1e-6;
    Eigen::Matrix2d J;
    J.col(0) = (forward(s + h, mu) - forward(s - h, mu)) / (2 * h);
    J.col(1) = direction(s);
    const Eigen::Vector2d step = J.partialPivLu().solve(-Eigen::Vector2d(F));
    if (!step.allFinite()) return std::nullopt;
    s += step(0);
    mu += step(1);
    if (step.norm() < 1e-14) break;
  }
  if ((forward(s, mu) - X).norm() > 1e-9 * std::max(1.0, X.norm())) return std::nullopt;
  if (std::abs(mu) > mu_max) return std::nullopt;
  s = std::remainder(s, 2 * kPi);
  return std::make_pair(s, mu);
}

std::string to_string(URegime r) {
  switch (r) {
    case URegime::LogOverT:
      return "log t/t";
    case URegime::LogMuOverT:
      return "log<mu>/t";
    case URegime::OneOverT:
      return "1/t";
  }
  return "";
}

RegimePrediction predict_u_regime(const OutcomeChart& chart, const Vec& X, double t, double mu_max) {
  if (!(t >= 10)) throw DomainError("predict_u_regime needs t >= 10");
  RegimePrediction p;
  const auto inv = chart.inverse(X, mu_max);
  if (!inv) {
    p.regime = URegime::OneOverT;
    p.mu = std::numeric_limits<double>::quiet_NaN();
    p.magnitude = 1.0 / t;
    return p;
  }
  p.mu = inv->second;
  if (std::abs(p.mu) <= 1.0 / std::sqrt(t)) {
    p.regime = URegime::LogOverT;
    p.magnitude = std::log(t) / t;
  } else {
    p.regime = URegime::LogMuOverT;
    p.magnitude = (1.0 + std::abs(std::log(std::abs(p.mu)))) / t;
  }
  return p;
}

}  // namespace rlab
