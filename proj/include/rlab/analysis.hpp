#pragma once

#include "rlab/spectral.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rlab {

struct NormResult {
  double value = 0.0;
  bool tail_flag = false;  // still growing at the box edge
};

// (sum <x>^{2s} |f|^2 dx^d)^(1/2) over the physical grid
NormResult weighted_norm(const SpectralGrid& g, const CVec& physical, double s);
// Same for a closed form, trapezoid rule on [-half_width, half_width]^d with n points per axis.
NormResult weighted_norm(const std::function<cplx(const Vec&)>& f, int d, double s, double half_width, int n = 256);

struct DecaySeries {
  std::vector<double> t, value;
  std::string norm = "Linf";
  std::string scenario;
};

enum class DecayModel { Power, LogPower };
std::string to_string(DecayModel m);

struct DecayFit {
  DecayModel model = DecayModel::Power;
  double gamma = 0.0, amplitude = 0.0;          // of the selected model
  double gamma_power = 0.0, amp_power = 0.0;    // A t^{-gamma}
  double gamma_log = 1.0, amp_log = 0.0;        // B log t t^{-gamma}
  double rms_power = 0.0, rms_log = 0.0;        // log-space residuals
  double margin = 1.0;                          // worse rms / better rms
  bool decisive = false;                        // margin >= threshold
  double t_lo = 0.0, t_hi = 0.0;
  int points = 0;
};

struct FitOptions {
  double t_lo = -1.0, t_hi = -1.0;  // default window [t_max / 10, t_max]
  bool free_log_gamma = false;
  double margin = 1.5;
};

DecayFit fit_decay(const DecaySeries& s, const FitOptions& opt = {});

struct RateFit {
  double rate = 0.0, amplitude = 0.0, rms = 0.0;
  std::vector<double> t, diff;  // sup-norm differences
  bool monotone = true;
};

// power fit of max |h(t) - h_inf| over the grid
RateFit convergence_rate(const std::vector<double>& t, const std::vector<CVec>& h, const CVec& h_inf);
RateFit convergence_rate(const std::vector<double>& t, const std::vector<double>& sup_diff);

struct SingularityScan {
  int d = 2;
  Vec crossing;                            // xi on the outcome set
  std::vector<double> offsets;
  std::vector<cplx> plus, minus;           // h_inf at crossing +/- offset * dir
  std::vector<double> surrogate_plus, surrogate_minus;
  // d = 2: h_inf ~ alpha + beta log|phi(xi, H(xi))| on each side, alpha and beta
  // affine in the offset; slope is beta at the crossing
  cplx slope_plus{0, 0}, slope_minus{0, 0};
  double r2_plus = 0.0, r2_minus = 0.0;
  double slope_se_plus = 0.0, slope_se_minus = 0.0;
  // d = 3: log |h_inf(crossing + delta) - h_inf(crossing)| vs log delta
  double holder_plus = 0.0, holder_minus = 0.0;
  double slope() const { return 0.5 * (std::abs(slope_plus) + std::abs(slope_minus)); }
  double r2() const { return std::min(r2_plus, r2_minus); }
  double holder() const { return 0.5 * (holder_plus + holder_minus); }
};

// Locates the crossing of the segment [p0, p1] with the outcome set by
// bisection on the signed surrogate, then samples h_inf at log-spaced offsets.
SingularityScan singularity_scan(const std::function<cplx(const Vec&)>& h_inf,
                                 const std::function<double(const Vec&)>& surrogate, const Vec& p0, const Vec& p1,
                                 const std::vector<double>& offsets);

std::vector<double> logspace(double lo, double hi, int n);

}  // namespace rlab
