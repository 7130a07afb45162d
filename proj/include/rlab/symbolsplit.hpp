#pragma once

#include "rlab/spectral.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

namespace rlab {

enum class GradientSelector { Full, Eta };
std::string to_string(GradientSelector s);

// Smooth monotone step on [0, 1] built from the mollifier exp(1 - 1/(1 - x^2)):
// 0 with all derivatives at 0, 1 with all derivatives at 1.
double mollifier_step(double z);
// w(r) = 0 for r <= 1/2, 1 for r >= 2, smooth in log r in between
double split_weight(double r);

struct SplitSymbols {
  BilinearSymbol m1, m2;
  GradientSelector selector = GradientSelector::Full;
  std::string cutoff = "mollifier step in log2(|phi|/|grad phi|) over [-1, 1]";
  // points with phi = 0 and grad phi = 0 met during evaluation (assigned to m2)
  std::shared_ptr<std::atomic<long>> exact_resonances;
};

// m1 = m w(|phi| / |grad phi|), m2 = m - m1
SplitSymbols split(const BilinearSymbol& m, const PhaseTriple& triple, GradientSelector sel = GradientSelector::Full);

enum class Region { Omega1, Omega2 };
std::string to_string(Region r);

// Omega1: 2|phi| >= |grad phi| (selector gradient); Omega2: |phi| <= 2|grad phi|
bool in_region(const PhaseTriple& triple, Region r, const Vec& xi, const Vec& eta,
               GradientSelector sel = GradientSelector::Full);

// psi(y) = Theta(y/2) - Theta(y), supported in [1, 4); sum_j psi(2^{-j} v) telescopes.
double dyadic_bump(double y);

// chi_j(xi, eta) = psi(2^{-j} v) with v = |phi| (Omega1) or |grad_eta phi| (Omega2)
std::function<double(const Vec&, const Vec&)> dyadic_cutoff(const PhaseTriple& triple, Region r, int j);

struct ShellBox {
  Vec lo, hi;  // in R^{2d}: (xi, eta)
};

struct ShellVolume {
  double volume = 0.0, stderr_ = 0.0;
  long hits = 0, samples = 0;
  double eta_extent = 0.0;  // diameter of the eta-projection of the hits (box metric)
};

// Monte-Carlo volume of region ∩ {2^{j-1} <= v < 2^{j+2}} ∩ {mask != 0} inside box.
// Deterministic for a given seed: samples are drawn in fixed blocks with
// per-block engines seeded from (seed, block).
ShellVolume shell_volume(const PhaseTriple& triple, Region r, int j, long samples, std::uint64_t seed,
                         const ShellBox& box, const std::function<bool(const Vec&, const Vec&)>& mask = {},
                         GradientSelector sel = GradientSelector::Full);

}  // namespace rlab
