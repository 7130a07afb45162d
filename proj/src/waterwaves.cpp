#include "rlab/waterwaves.hpp"

#include "rlab/symbolsplit.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace rlab {

namespace {

double root(const std::function<double(double)>& f, double lo, double hi) {
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

void require_positive(double g, double sigma) {
  if (!(g > 0 && sigma > 0)) throw DomainError("water waves need g > 0 and sigma > 0");
}

double rel(double lhs, double rhs) { return (rhs - lhs) / std::abs(rhs); }

}  // namespace

double ww_c0() { return (2.0 * std::sqrt(3.0) - 3.0) / 3.0; }

Landmarks landmarks(double g, double sigma) {
  require_positive(g, sigma);
  Landmarks L;
  L.c0 = ww_c0();
  L.lambda0 = std::sqrt(L.c0 * g / sigma);
  L.lambda2 = std::sqrt(g / (2.0 * sigma));
  const RadialProfile tau = waterwave_profile(g, sigma);
  auto h = [&](double l) { return conjugate_alpha(tau, l) - 2.0 * l; };
  L.lambda1 = root(h, 1e-3 * L.lambda0, 0.999 * L.lambda0);
  return L;
}

WaterWaveScenario::WaterWaveScenario(double g, double sigma)
    : g_(g), sigma_(sigma), tau_(waterwave_profile(g, sigma)), marks_(landmarks(g, sigma)) {}

double WaterWaveScenario::p(const Vec& xi) const {
  const double r = xi.norm();
  if (r == 0.0) throw DomainError("p(xi) is singular at xi = 0");
  return std::sqrt((g_ + sigma_ * r * r) / r);
}

double WaterWaveScenario::alpha(double lambda) const { return conjugate_alpha(tau_, lambda); }

ToySymbols toy_symbols(double g, double sigma, int d) {
  const WaterWaveScenario ww(g, sigma);
  const double pre = std::pow(2.0 * kPi, 0.5 * d);
  auto m1 = [ww, pre](const Vec& xi, const Vec& eta) {
    if (eta.norm() == 0.0) throw DomainError("m1 is singular at eta = 0");
    // p(xi) ~ |xi|^{-1/2} against a bracket of size |xi|: the limit at 0 is 0
    if (xi.norm() == 0.0) return 0.0;
    const Vec z = xi - eta;
    return pre * ww.p(xi) / ww.p(eta) * (xi.dot(z) - xi.norm() * z.norm());
  };
  auto m2 = [pre](const Vec& xi, const Vec& eta) {
    const Vec z = xi - eta;
    return 0.5 * pre * (eta.dot(z) + eta.norm() * z.norm());
  };
  return {BilinearSymbol(m1, {}, "m1_ww"), BilinearSymbol(m2, {}, "m2_ww")};
}

double annulus_cutoff(double r, double lambda2) {
  const double s = (r - 2.0 * lambda2) / lambda2;
  return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
}

BilinearSymbol truncated_m2(double g, double sigma, int d) {
  require_positive(g, sigma);
  const double l2 = std::sqrt(g / (2.0 * sigma));
  const double pre = 0.5 * std::pow(2.0 * kPi, 0.5 * d);
  auto m = [=](const Vec& xi, const Vec& eta) {
    const double cut = annulus_cutoff(xi.norm(), l2);
    if (cut == 0.0) return 0.0;
    const Vec z = xi - eta;
    return pre * cut * (eta.dot(z) + eta.norm() * z.norm());
  };
  SupportBox box;
  box.xi = 3.0 * l2;
  SeparatedForm sep;
  sep.rank = d + 1;
  auto factor = [d](int k, const Vec& v) { return k < d ? v(k) : v.norm(); };
  sep.p = factor;
  sep.q = factor;
  sep.outer = [=](const Vec& xi) { return pre * annulus_cutoff(xi.norm(), l2); };
  return BilinearSymbol(m, box, "m2_ww_truncated").with_separated(sep);
}

std::string to_string(WWKind k) {
  switch (k) {
    case WWKind::PlusPlus: return "++";
    case WWKind::PlusMinus: return "+-";
    case WWKind::MinusMinus: return "--";
  }
  return "?";
}

WWKind parse_ww_kind(const std::string& s) {
  if (s == "++" || s == "plusplus") return WWKind::PlusPlus;
  if (s == "+-" || s == "plusminus") return WWKind::PlusMinus;
  if (s == "--" || s == "minusminus") return WWKind::MinusMinus;
  throw DomainError("unknown interaction kind '" + s + "' (expected ++, +- or --)");
}

PhaseTriple ww_triple(WWKind kind, double g, double sigma, int d) {
  require_positive(g, sigma);
  const Dispersion tau = Dispersion::radial(d, waterwave_profile(g, sigma));
  const Dispersion neg = tau.negated();
  switch (kind) {
    case WWKind::PlusPlus: return PhaseTriple(neg, tau, tau);
    case WWKind::PlusMinus: return PhaseTriple(neg, tau, neg);
    case WWKind::MinusMinus: return PhaseTriple(neg, neg, neg);
  }
  throw DomainError("unknown interaction kind");
}

InteractionScan interaction_scan(WWKind kind, double g, double sigma, const std::vector<double>& grid) {
  const WaterWaveScenario ww(g, sigma);
  const Landmarks& L = ww.marks();
  InteractionScan out;
  out.kind = kind;
  for (double l : grid) {
    if (!(l > 0)) throw DomainError("interaction_scan needs positive radii");
    if (std::abs(l - L.lambda0) < 1e-6) {
      ++out.trimmed;
      out.log.push_back("trimmed lambda = " + std::to_string(l) + " near lambda0");
      continue;
    }
    const double a = ww.alpha(l);
    double f = 0.0;
    switch (kind) {
      case WWKind::PlusPlus: f = ww.tau(2 * l) + 2 * ww.tau(l); break;
      case WWKind::PlusMinus: f = ww.tau(std::abs(l - a)) + ww.tau(l) - ww.tau(a); break;
      case WWKind::MinusMinus: f = ww.tau(l + a) - ww.tau(l) - ww.tau(a); break;
    }
    out.lambda.push_back(l);
    out.alpha.push_back(a);
    out.f.push_back(f);
  }
  if (out.f.empty()) throw DomainError("interaction_scan grid is empty after trimming");
  const auto [mn, mx] = std::minmax_element(out.f.begin(), out.f.end());
  switch (kind) {
    case WWKind::PlusPlus:
      out.extreme = *mn;
      out.sign_ok = *mn > 0;
      break;
    case WWKind::PlusMinus: {
      out.extreme = *mn;
      out.sign_ok = *mn > 0;
      out.f_at_lambda0 = ww.tau(0.0) + ww.tau(L.lambda0) - ww.tau(ww.alpha(L.lambda0));
      // increasing on (0, l1), decreasing on (l1, l0), increasing on (l0, inf)
      auto piece = [&](double l) { return l < L.lambda1 ? 0 : (l < L.lambda0 ? 1 : 2); };
      for (size_t k = 1; k < out.f.size(); ++k) {
        const int p0 = piece(out.lambda[k - 1]), p1 = piece(out.lambda[k]);
        if (p0 != p1) continue;
        const double df = (out.f[k] - out.f[k - 1]) * (out.lambda[k] > out.lambda[k - 1] ? 1 : -1);
        if ((p0 == 1 && df > 0) || (p0 != 1 && df < 0)) {
          out.monotone_ok = false;
          out.log.push_back("monotonicity broken near lambda = " + std::to_string(out.lambda[k]));
        }
      }
      break;
    }
    case WWKind::MinusMinus: {
      out.extreme = *mx;
      out.sign_ok = *mx < 0;
      auto h = [&](double l) { return ww.tau(2 * l) - 2 * ww.tau(l); };
      // negative below lambda2, positive above
      double lo = L.lambda0, hi = 2 * L.lambda2;
      while (h(hi) <= 0) hi *= 2;
      out.branch_zero = root(h, lo, hi);
      out.branch_residual = std::abs(h(out.branch_zero));
      break;
    }
  }
  return out;
}

InequalityMargins verify_inequalities(double g, double sigma, const std::vector<double>& grid) {
  const WaterWaveScenario ww(g, sigma);
  const double c0 = ww.marks().c0, s = sigma;
  InequalityMargins out;
  out.constant_sum = (1 + 3 * c0) * (1 + 3 * c0) / ((1 - c0) * (1 - c0)) + 5 * c0;
  out.constant_pair = 2 * c0 + 2 * (1 + 3 * c0) * (1 + 3 * c0) / (9 * (1 - c0) * (1 - c0));
  out.constants_ok = out.constant_sum < 4 && out.constant_pair < 1;
  out.la_ok = out.eq1_ok = out.eq2_ok = out.res_ok = !grid.empty();
  for (double l0 : grid) {
    if (std::abs(l0 - ww.marks().lambda0) < 1e-6) continue;
    const double a0 = ww.alpha(l0);
    const double l = std::max(l0, a0), a = std::min(l0, a0), sum = a + l;
    out.lambda.push_back(l0);
    out.la.push_back(rel(9 * (1 - c0) * (1 - c0) * s * l * a, (1 + 3 * c0) * (1 + 3 * c0) * g));
    out.eq1.push_back(rel(9 * s * s * a * std::pow(sum, 4), 4 * s * (g + s * a * a) * std::pow(sum, 3)));
    out.eq2.push_back(rel(6 * a * s * g * sum * sum, 3 * sum * g * g));
    const double q = g + 3 * s * sum * sum;
    out.res.push_back(rel(a * q * q, 4 * sum * (g + s * a * a) * (g + s * sum * sum)));
    out.la_ok = out.la_ok && out.la.back() >= 0;
    out.eq1_ok = out.eq1_ok && out.eq1.back() > 0;
    out.eq2_ok = out.eq2_ok && out.eq2.back() > 0;
    out.res_ok = out.res_ok && out.res.back() > 0;
  }
  return out;
}

GenericCertificate certify_generic(double g, double sigma, int sigma_grid) {
  const PhaseTriple triple = ww_triple(WWKind::MinusMinus, g, sigma, 2);
  const double scale = std::sqrt(g / sigma);
  ResonanceSearch rs;
  rs.R_lo = 0.1 * scale;
  rs.R_hi = 10.0 * scale;
  const auto pts = find_radial_resonances(triple, rs);
  if (pts.empty()) throw DomainError("no -- resonance found");
  const auto best = std::min_element(pts.begin(), pts.end(), [](const ResonancePoint& x, const ResonancePoint& y) {
    return std::abs(x.lambda - 0.5) < std::abs(y.lambda - 0.5);
  });
  GenericCertificate out;
  out.point = *best;
  out.radial = check_assumptions(triple, out.point, sigma_grid, 1e-9, A3Method::RadialClosedForm);
  out.generic = check_assumptions(triple, out.point, sigma_grid, 1e-9, A3Method::GenericDeterminant);
  out.samples = static_cast<int>(std::min(out.radial.A3_samples.size(), out.generic.A3_samples.size()));
  for (int k = 0; k < out.samples; ++k) {
    const auto& r = out.radial.A3_samples[k];
    const auto& q = out.generic.A3_samples[k];
    if (r.block_ok == q.block_ok && r.xi_ok == q.xi_ok) ++out.agreeing;
  }
  return out;
}

LatticeSetup ww_decay_setup(double g, double sigma, const DecayScenarioOptions& opt) {
  if (!(opt.width > 0 && opt.amp_threshold > 0 && opt.amp_threshold < 1 && opt.xi_radius > 0))
    throw DomainError("invalid decay scenario options");
  const double l2 = std::sqrt(g / (2.0 * sigma));
  Vec center = Vec::Zero(2);
  center(0) = l2;
  const double w = opt.width, floor = opt.data_floor;
  auto data = [=](const Vec& eta) {
    return std::exp(-(eta - center).squaredNorm() / (2 * w * w)) * mollifier_step((eta.norm() - floor) / 0.1);
  };
  const auto sep = truncated_m2(g, sigma, 2).separated();
  LatticeSetup s{ww_triple(WWKind::MinusMinus, g, sigma, 2)};
  s.f = data;
  s.g = data;
  s.f_center = center;
  s.g_center = center;
  s.data_radius = w * std::sqrt(2.0 * std::log(1.0 / opt.amp_threshold));
  s.symbol = *sep;
  s.xi_center = 2.0 * center;
  s.xi_radius = opt.xi_radius;
  s.mirror = true;
  s.grid_factor_eta = s.grid_factor_xi = opt.grid_factor;
  s.grid_offset = opt.grid_offset;
  s.amp_threshold = opt.amp_threshold;
  return s;
}

Vec ww_ray_point(double g, double sigma, double mu) {
  const RadialProfile tau = waterwave_profile(g, sigma);
  const double l2 = std::sqrt(g / (2.0 * sigma));
  const double xbar = tau.d1(2 * l2), grad = tau.d1(2 * l2) - tau.d1(l2);
  Vec X = Vec::Zero(2);
  X(0) = xbar + mu * grad;
  return X;
}

}  // namespace rlab
