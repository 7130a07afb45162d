#pragma once

#include "rlab/resonance.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rlab {

// F(z) = int_z^inf e^{i tau} / tau dtau, z > 0
cplx exp_integral_F(double z);

// Z(t, u) = int_{1/t}^1 e^{i t sigma u} dsigma / sigma, t > 1
cplx model_Z(double t, double u);

// Y(u) = int_0^1 e^{i sigma u} / sqrt(sigma) dsigma
cplx model_Y(double u);

struct ScalarPhase {
  std::function<double(double)> zeta, dzeta, d2zeta;
};

struct Cutoff {
  std::function<double(double)> chi;
  double support_hi = 1.0;  // chi vanishes on [support_hi, inf)
};

enum class ColibriRegime { Log, Positive, Negative };

struct ChardonneretResult {
  cplx oracle{0, 0};
  cplx asymptotic{0, 0};
  double sigma0 = 0.0;
  double alpha = 0.0;
  ColibriRegime regime = ColibriRegime::Log;
  double discrepancy() const { return std::abs(oracle - asymptotic); }
};

// int_{1/t}^inf e^{i t zeta} chi dsigma / sigma, by quadrature and by the
// three-regime model formula. Throws DomainError when zeta'' <= 0 is sampled.
ChardonneretResult chardonneret(const ScalarPhase& zeta, const Cutoff& chi, double t);

// psi(xi, eta, sigma, X) = a(xi) + sigma phi(xi, eta) + X.xi
double psi(const PhaseTriple& triple, const Vec& xi, const Vec& eta, double sigma, const Vec& X);

struct NewtonOptions {
  int max_iter = 60;
  double tol = 1e-12;
};

// Solves grad_xi psi = 0 in xi from `guess`. Empty when Newton fails.
std::optional<Vec> stationary_xi(const PhaseTriple& triple, const Vec& eta, double sigma, const Vec& X,
                                 const Vec& guess, const NewtonOptions& opt = {});

struct StationaryPair {
  Vec xi, eta;  // Xi(H, sigma, X), H(sigma, X)
};

// Solves grad_xi psi = 0 and grad_eta phi = 0 jointly (the eta-stationary
// point of psi(Xi(eta), eta)).
std::optional<StationaryPair> stationary_eta(const PhaseTriple& triple, double sigma, const Vec& X,
                                             const StationaryPair& guess, const NewtonOptions& opt = {});

// sigma-phase zeta_X(sigma) = psi(Xi, H, sigma, X), followed by continuation
// from a reference stationary pair at sigma = 0.
class PhasePath {
 public:
  PhasePath(PhaseTriple triple, Vec X, StationaryPair reference);

  const Vec& X() const { return X_; }
  std::optional<StationaryPair> solve(double sigma) const;
  double zeta(double sigma) const;
  double dzeta(double sigma) const;   // phi(Xi, H)
  double d2zeta(double sigma) const;  // grad_xi phi . d_sigma Xi
  // Newton on zeta' from `guess`
  std::optional<double> sigma0(double guess) const;
  // sign(-sigma0) sqrt|zeta(0) - zeta(sigma0)|
  std::optional<double> alpha(double guess) const;
  ScalarPhase as_scalar() const;

 private:
  StationaryPair at(double sigma) const;
  PhaseTriple triple_;
  Vec X_;
  StationaryPair ref_;
};

// Largest sigma <= 0.5 (grid step 0.005) with min |eig Hess_xi psi| >= half
// its sigma = 0 value over the given (xi, eta) samples.
double epsilon0(const PhaseTriple& triple, const std::vector<std::pair<Vec, Vec>>& support_samples);

// Chart (Xbar(s), mu) -> Xbar(s) + mu grad_xi phi(xibar(s), etabar(s)) around a
// rotation-invariant resonant circle (d = 2, radial triple).
class OutcomeChart {
 public:
  OutcomeChart(const PhaseTriple& triple, const ResonancePoint& pt);

  Vec xi_bar(double s) const;
  Vec eta_bar(double s) const;
  Vec X_bar(double s) const;
  Vec direction(double s) const;  // grad_xi phi on the resonant circle
  Vec forward(double s, double mu) const;
  // (s, mu) with forward(s, mu) = X; projection then Newton
  std::optional<std::pair<double, double>> inverse(const Vec& X, double mu_max = 1.0) const;
  std::vector<Vec> sample(int n) const;
  const ResonancePoint& point() const { return pt_; }
  const PhaseTriple& triple() const { return triple_; }

 private:
  PhaseTriple triple_;
  ResonancePoint pt_;
};

enum class URegime { LogOverT, LogMuOverT, OneOverT };
std::string to_string(URegime r);

struct RegimePrediction {
  URegime regime = URegime::OneOverT;
  double mu = 0.0;         // NaN when X is off the chart
  double magnitude = 0.0;  // order of |u| up to the amplitude
};

// |mu| <= 1/sqrt(t): log t / t; |mu| <= mu_max: (1 + |log mu|) / t; else 1/t.
RegimePrediction predict_u_regime(const OutcomeChart& chart, const Vec& X, double t, double mu_max = 0.5);

}  // namespace rlab
