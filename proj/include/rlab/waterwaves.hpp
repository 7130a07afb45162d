#pragma once

#include "rlab/interaction.hpp"
#include "rlab/resonance.hpp"
#include "rlab/spectral.hpp"

#include <string>
#include <vector>

namespace rlab {

// (2 sqrt 3 - 3) / 3: sigma lambda0^2 = c0 g
double ww_c0();

struct Landmarks {
  double lambda0 = 0.0;  // inflection of tau
  double lambda1 = 0.0;  // alpha(lambda1) = 2 lambda1
  double lambda2 = 0.0;  // second harmonic, tau(2 l) = 2 tau(l)
  double c0 = 0.0;
};

Landmarks landmarks(double g, double sigma);

// Capillary-gravity waves, tau(s) = sqrt(g s + sigma s^3).
class WaterWaveScenario {
 public:
  WaterWaveScenario(double g, double sigma);

  double g() const { return g_; }
  double sigma() const { return sigma_; }
  const RadialProfile& profile() const { return tau_; }
  const Landmarks& marks() const { return marks_; }
  double tau(double s) const { return tau_.value(s); }
  // p(xi) = sqrt((g + sigma |xi|^2) / |xi|)
  double p(const Vec& xi) const;
  // the other radius with the same tau'
  double alpha(double lambda) const;

 private:
  double g_, sigma_;
  RadialProfile tau_;
  Landmarks marks_;
};

struct ToySymbols {
  BilinearSymbol m1, m2;
};

// m1 = (2 pi)^{d/2} p(xi)/p(eta) (xi.(xi-eta) - |xi||xi-eta|),
// m2 = (2 pi)^{d/2}/2 (eta.(xi-eta) + |eta||xi-eta|). m1 throws at eta = 0.
ToySymbols toy_symbols(double g, double sigma, int d = 2);

// exp(1 - 1/(1 - s^2)), s = (|xi| - 2 lambda2) / lambda2; supported in lambda2 < |xi| < 3 lambda2
double annulus_cutoff(double r, double lambda2);

// m2 times the annulus cutoff in xi, with its exact rank-(d+1) separated form.
BilinearSymbol truncated_m2(double g, double sigma, int d = 2);

enum class WWKind { PlusPlus, PlusMinus, MinusMinus };
std::string to_string(WWKind k);
WWKind parse_ww_kind(const std::string& s);

// phi_{+-+-} = tau(xi) +- tau(eta) +- tau(xi - eta) as a triple (a, b, c).
PhaseTriple ww_triple(WWKind kind, double g, double sigma, int d = 2);

struct InteractionScan {
  WWKind kind = WWKind::MinusMinus;
  std::vector<double> lambda, alpha, f;
  int trimmed = 0;                  // grid points dropped near lambda0
  std::vector<std::string> log;
  bool sign_ok = false;             // ++: f > 0; +-: f > 0 off lambda0; --: f < 0
  bool monotone_ok = true;          // +- only
  double f_at_lambda0 = 0.0;        // +- only
  double branch_zero = 0.0;         // --: zero of tau(2 l) - 2 tau(l)
  double branch_residual = 0.0;
  double extreme = 0.0;             // max f (--), min f (++, +-)
};

// ++: tau(2l) + 2 tau(l); +-: tau(|l - a|) + tau(l) - tau(a); --: tau(l + a) - tau(l) - tau(a)
InteractionScan interaction_scan(WWKind kind, double g, double sigma, const std::vector<double>& grid);

struct InequalityMargins {
  // relative margins (rhs - lhs) / rhs on the ordered pair lambda >= lambda0 >= alpha
  std::vector<double> lambda, la, eq1, eq2, res;
  double constant_sum = 0.0;   // (1 + 3c0)^2 / (1 - c0)^2 + 5 c0, must be < 4
  double constant_pair = 0.0;  // 2 c0 + 2 (1 + 3c0)^2 / (9 (1 - c0)^2), must be < 1
  bool la_ok = false, eq1_ok = false, eq2_ok = false, res_ok = false, constants_ok = false;
  bool all_ok() const { return la_ok && eq1_ok && eq2_ok && res_ok && constants_ok; }
};

InequalityMargins verify_inequalities(double g, double sigma, const std::vector<double>& grid);

struct GenericCertificate {
  ResonancePoint point;
  AssumptionReport radial, generic;
  int samples = 0, agreeing = 0;  // sigma samples where both A3 paths give the same verdicts
  bool pass() const { return radial.all_pass() && generic.all_pass() && samples > 0 && agreeing == samples; }
};

// --: locate (2 lambda2, 1/2) and certify the assumptions with both A3 paths.
GenericCertificate certify_generic(double g, double sigma, int sigma_grid = 101);

struct DecayScenarioOptions {
  double width = 0.35;          // Gaussian data centered at lambda2 e1
  double data_floor = 0.45;     // data switched off for |eta| below this (over 0.1), away from lambda0
  double xi_radius = 1.3;       // output frequencies within this distance of 2 lambda2 e1
  double amp_threshold = 1e-6;
  double grid_factor = 2.5, grid_offset = 30.0;
};

// Truncated -- scenario on the lattice backend, d = 2.
LatticeSetup ww_decay_setup(double g, double sigma, const DecayScenarioOptions& opt = {});

// X on the ray through the outcome set: (tau'(2 lambda2) + mu |grad_xi phi|) e1
Vec ww_ray_point(double g, double sigma, double mu);

}  // namespace rlab
