#include "rlab/symbolsplit.hpp"

#include <cmath>
#include <random>

namespace rlab {

namespace {

double bump(double x) { return std::abs(x) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0; }

// decreasing: 1 on y <= 1, 0 on y >= 2
double theta(double y) { return 1.0 - mollifier_step(y - 1.0); }

double grad_norm(const PhaseTriple& T, const Vec& xi, const Vec& eta, GradientSelector sel) {
  return sel == GradientSelector::Full ? T.full_grad_norm(xi, eta) : T.grad_eta(xi, eta).norm();
}

}  // namespace

std::string to_string(GradientSelector s) { return s == GradientSelector::Full ? "full" : "eta"; }
std::string to_string(Region r) { return r == Region::Omega1 ? "omega1" : "omega2"; }

double mollifier_step(double z) {
  if (z <= 0.0) return 0.0;
  if (z >= 1.0) return 1.0;
  // bump(1 - z) rises from 0 (flat) at z = 0 to 1 at z = 1
  const double up = bump(1.0 - z), down = bump(z);
  return up / (up + down);
}

double split_weight(double r) {
  if (r <= 0.5) return 0.0;
  if (r >= 2.0) return 1.0;
  return mollifier_step(0.5 * (std::log2(r) + 1.0));
}

SplitSymbols split(const BilinearSymbol& m, const PhaseTriple& triple, GradientSelector sel) {
  auto counter = std::make_shared<std::atomic<long>>(0);
  auto weight = [triple, sel, counter](const Vec& xi, const Vec& eta) {
    const double ph = std::abs(triple.phi(xi, eta));
    const double gn = grad_norm(triple, xi, eta, sel);
    if (gn == 0.0) {
      if (ph == 0.0) {
        ++*counter;
        return 0.0;
      }
      return 1.0;
    }
    return split_weight(ph / gn);
  };
  BilinearSymbol m1(
      [m, weight](const Vec& xi, const Vec& eta) {
        const double v = m(xi, eta);
        return v == 0.0 ? 0.0 : v * weight(xi, eta);
      },
      m.support(), m.label() + "_1");
  BilinearSymbol m2(
      [m, weight](const Vec& xi, const Vec& eta) {
        const double v = m(xi, eta);
        return v == 0.0 ? 0.0 : v - v * weight(xi, eta);
      },
      m.support(), m.label() + "_2");
  return {m1, m2, sel, "mollifier step in log2(|phi|/|grad phi|) over [-1, 1]", counter};
}

bool in_region(const PhaseTriple& triple, Region r, const Vec& xi, const Vec& eta, GradientSelector sel) {
  const double ph = std::abs(triple.phi(xi, eta));
  const double gn = grad_norm(triple, xi, eta, sel);
  return r == Region::Omega1 ? 2.0 * ph >= gn : ph <= 2.0 * gn;
}

double dyadic_bump(double y) { return theta(0.5 * y) - theta(y); }

std::function<double(const Vec&, const Vec&)> dyadic_cutoff(const PhaseTriple& triple, Region r, int j) {
  if (j > 0) throw DomainError("dyadic cutoffs are defined for j <= 0");
  const double scale = std::ldexp(1.0, -j);
  return [triple, r, scale](const Vec& xi, const Vec& eta) {
    const double v = r == Region::Omega1 ? std::abs(triple.phi(xi, eta)) : triple.grad_eta(xi, eta).norm();
    return dyadic_bump(scale * v);
  };
}

ShellVolume shell_volume(const PhaseTriple& triple, Region r, int j, long samples, std::uint64_t seed,
                         const ShellBox& box, const std::function<bool(const Vec&, const Vec&)>& mask,
                         GradientSelector sel) {
  const int d = triple.dim();
  if (box.lo.size() != 2 * d || box.hi.size() != 2 * d) throw DomainError("shell box must live in R^{2d}");
  if (samples < 1) throw DomainError("need at least one sample");
  const double lo_v = std::ldexp(1.0, j - 1), hi_v = std::ldexp(1.0, j + 2);
  const double vol = (box.hi - box.lo).prod();
  constexpr long kBlock = 1 << 16;

  ShellVolume out;
  out.samples = samples;
  Vec emin = Vec::Constant(d, INFINITY), emax = Vec::Constant(d, -INFINITY);
  Vec xi(d), eta(d);
  for (long start = 0, block = 0; start < samples; start += kBlock, ++block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block)};
    std::mt19937_64 eng(seq);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const long n = std::min(kBlock, samples - start);
    for (long s = 0; s < n; ++s) {
      for (int a = 0; a < d; ++a) xi(a) = box.lo(a) + (box.hi(a) - box.lo(a)) * U(eng);
      for (int a = 0; a < d; ++a) eta(a) = box.lo(d + a) + (box.hi(d + a) - box.lo(d + a)) * U(eng);
      if (mask && !mask(xi, eta)) continue;
      const double v = r == Region::Omega1 ? std::abs(triple.phi(xi, eta)) : triple.grad_eta(xi, eta).norm();
      if (v < lo_v || v >= hi_v) continue;
      if (!in_region(triple, r, xi, eta, sel)) continue;
      ++out.hits;
      emin = emin.cwiseMin(eta);
      emax = emax.cwiseMax(eta);
    }
  }
  const double p = static_cast<double>(out.hits) / samples;
  out.volume = vol * p;
  // zero hits: one pseudo-hit in the binomial variance
  const double pv = out.hits ? p : 1.0 / samples;
  out.stderr_ = vol * std::sqrt(pv * (1.0 - pv) / samples);
  if (out.hits) out.eta_extent = (emax - emin).lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace rlab
