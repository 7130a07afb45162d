#include "rlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rlab {

namespace {

struct LineFit {
  double c0 = 0, c1 = 0, rms = 0, sxx = 0, sse = 0;
};

LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  LineFit f;
  f.c1 = sxx > 0 ? sxy / sxx : 0.0;
  f.c0 = my - f.c1 * mx;
  for (size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - f.c0 - f.c1 * x[k];
    f.sse += r * r;
  }
  f.rms = std::sqrt(f.sse / n);
  f.sxx = sxx;
  return f;
}

struct ComplexFit {
  cplx slope{0, 0};
  double r2 = 0.0, se = 0.0;
};

// y ~ c0 + c1 x + c2 d + c3 d x: alpha + beta log|phi| with alpha, beta to first
// order in the offset d; slope = c1 and its standard error.
ComplexFit complex_local_fit(const std::vector<double>& x, const std::vector<double>& d, const std::vector<cplx>& y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Mat A(n, 4);
  Eigen::MatrixX2d Y(n, 2);
  for (Eigen::Index k = 0; k < n; ++k) {
    A.row(k) << 1.0, x[k], d[k], d[k] * x[k];
    Y.row(k) << y[k].real(), y[k].imag();
  }
  const Eigen::ColPivHouseholderQR<Mat> qr(A);
  const Eigen::MatrixX2d C = qr.solve(Y);
  const double sse = (A * C - Y).squaredNorm();
  const cplx mean = std::accumulate(y.begin(), y.end(), cplx(0.0)) / static_cast<double>(n);
  double sst = 0;
  for (const cplx& v : y) sst += std::norm(v - mean);
  ComplexFit f;
  f.slope = cplx(C(1, 0), C(1, 1));
  f.r2 = sst > 0 ? 1.0 - sse / sst : 0.0;
  if (n > 4) {
    // residual variance pooled over real and imaginary parts
    const Mat cov = (A.transpose() * A).inverse() * (sse / (2.0 * (n - 4)));
    f.se = std::sqrt(2.0 * cov(1, 1));
  }
  return f;
}

}  // namespace

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = lo * std::pow(hi / lo, n == 1 ? 0.0 : k / (n - 1.0));
  return v;
}

NormResult weighted_norm(const SpectralGrid& g, const CVec& phys, double s) {
  if (s < 0) throw DomainError("weight exponent must be nonnegative");
  if (phys.size() != g.size()) throw DomainError("field size does not match grid");
  const double inner = 0.45 * g.period();
  double all = 0, core = 0;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Vec x = g.x_point(k);
    const double v = std::pow(1.0 + x.squaredNorm(), s) * std::norm(phys(k));
    all += v;
    if (x.lpNorm<Eigen::Infinity>() <= inner) core += v;
  }
  const double w = std::pow(g.dx(), g.dim());
  NormResult r{std::sqrt(all * w), false};
  r.tail_flag = all > 0 && (all - core) > 1e-12 * all;
  return r;
}

NormResult weighted_norm(const std::function<cplx(const Vec&)>& f, int d, double s, double half_width, int n) {
  if (s < 0) throw DomainError("weight exponent must be nonnegative");
  if (d < 1 || d > 3 || n < 2) throw DomainError("bad quadrature grid");
  const double h = 2.0 * half_width / (n - 1);
  const double inner = 0.9 * half_width;
  double all = 0, core = 0;
  std::vector<int> idx(d, 0);
  Vec x(d);
  const long total = static_cast<long>(std::pow(n, d));
  for (long k = 0; k < total; ++k) {
    long r = k;
    double wt = 1.0;
    for (int a = d - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(r % n);
      r /= n;
      x(a) = -half_width + idx[a] * h;
      if (idx[a] == 0 || idx[a] == n - 1) wt *= 0.5;
    }
    const double v = wt * std::pow(1.0 + x.squaredNorm(), s) * std::norm(f(x));
    all += v;
    if (x.lpNorm<Eigen::Infinity>() <= inner) core += v;
  }
  NormResult res{std::sqrt(all * std::pow(h, d)), false};
  res.tail_flag = all > 0 && (all - core) > 1e-12 * all;
  return res;
}

std::string to_string(DecayModel m) { return m == DecayModel::Power ? "power" : "log-power"; }

DecayFit fit_decay(const DecaySeries& s, const FitOptions& opt) {
  if (s.t.size() != s.value.size()) throw DomainError("series times and values differ in length");
  for (size_t k = 0; k < s.t.size(); ++k) {
    if (!(s.value[k] > 0)) throw DomainError("decay fits need positive values");
    if (k && !(s.t[k] > s.t[k - 1])) throw DomainError("series times must be strictly increasing");
  }
  if (s.t.empty()) throw DomainError("empty series");
  DecayFit fit;
  fit.t_hi = opt.t_hi > 0 ? opt.t_hi : s.t.back();
  fit.t_lo = opt.t_lo > 0 ? opt.t_lo : fit.t_hi / 10.0;
  std::vector<double> L, y;
  for (size_t k = 0; k < s.t.size(); ++k)
    if (s.t[k] >= fit.t_lo * (1 - 1e-12) && s.t[k] <= fit.t_hi * (1 + 1e-12)) {
      L.push_back(std::log(s.t[k]));
      y.push_back(std::log(s.value[k]));
    }
  fit.points = static_cast<int>(L.size());
  if (fit.points < 10) throw DomainError("decay fits need at least 10 points in the window");
  if (L.front() <= 0) throw DomainError("log-power model needs t > 1 in the window");

  LineFit p = line_fit(L, y);
  fit.gamma_power = -p.c1;
  fit.amp_power = std::exp(p.c0);
  fit.rms_power = p.rms;

  std::vector<double> z(y.size());
  for (size_t k = 0; k < y.size(); ++k) z[k] = y[k] - std::log(L[k]);
  if (opt.free_log_gamma) {
    LineFit q = line_fit(L, z);
    fit.gamma_log = -q.c1;
    fit.amp_log = std::exp(q.c0);
    fit.rms_log = q.rms;
  } else {
    double c = 0;
    for (size_t k = 0; k < z.size(); ++k) c += z[k] + L[k];
    c /= z.size();
    double sse = 0;
    for (size_t k = 0; k < z.size(); ++k) sse += (z[k] + L[k] - c) * (z[k] + L[k] - c);
    fit.gamma_log = 1.0;
    fit.amp_log = std::exp(c);
    fit.rms_log = std::sqrt(sse / z.size());
  }
  const double tiny = 1e-300;
  if (fit.rms_log < fit.rms_power) {
    fit.model = DecayModel::LogPower;
    fit.margin = fit.rms_power / std::max(fit.rms_log, tiny);
    fit.gamma = fit.gamma_log;
    fit.amplitude = fit.amp_log;
  } else {
    fit.model = DecayModel::Power;
    fit.margin = fit.rms_log / std::max(fit.rms_power, tiny);
    fit.gamma = fit.gamma_power;
    fit.amplitude = fit.amp_power;
  }
  fit.decisive = fit.margin >= opt.margin;
  return fit;
}

RateFit convergence_rate(const std::vector<double>& t, const std::vector<double>& diff) {
  if (t.size() != diff.size() || t.size() < 5) throw DomainError("convergence rate needs >= 5 snapshots");
  RateFit r;
  r.t = t;
  r.diff = diff;
  std::vector<double> L, y;
  for (size_t k = 0; k < t.size(); ++k) {
    if (!(diff[k] > 0) || !(t[k] > 0)) throw DomainError("differences and times must be positive");
    if (k && diff[k] > diff[k - 1]) r.monotone = false;
    L.push_back(std::log(t[k]));
    y.push_back(std::log(diff[k]));
  }
  LineFit f = line_fit(L, y);
  r.rate = -f.c1;
  r.amplitude = std::exp(f.c0);
  r.rms = f.rms;
  return r;
}

RateFit convergence_rate(const std::vector<double>& t, const std::vector<CVec>& h, const CVec& h_inf) {
  if (t.size() != h.size()) throw DomainError("one snapshot per time expected");
  std::vector<double> diff;
  for (const CVec& v : h) diff.push_back((v - h_inf).cwiseAbs().maxCoeff());
  return convergence_rate(t, diff);
}

SingularityScan singularity_scan(const std::function<cplx(const Vec&)>& h_inf,
                                 const std::function<double(const Vec&)>& surrogate, const Vec& p0, const Vec& p1,
                                 const std::vector<double>& offsets) {
  if (offsets.size() < 6) throw DomainError("singularity scan needs at least 6 offsets");
  double f0 = surrogate(p0), f1 = surrogate(p1);
  if (f0 == 0.0 || f1 == 0.0) throw DomainError("segment endpoints must lie off the outcome set");
  if ((f0 > 0) == (f1 > 0)) throw DomainError("segment does not cross the outcome set (no sign change)");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = surrogate(p0 + mid * (p1 - p0));
    if ((fm > 0) == (f0 > 0))
      lo = mid;
    else
      hi = mid;
  }
  SingularityScan sc;
  sc.d = static_cast<int>(p0.size());
  sc.crossing = p0 + 0.5 * (lo + hi) * (p1 - p0);
  sc.offsets = offsets;
  const Vec dir = (p1 - p0).normalized();
  std::vector<double> xp, xm, ld;
  for (double off : offsets) {
    const Vec a = sc.crossing + off * dir, b = sc.crossing - off * dir;
    sc.plus.push_back(h_inf(a));
    sc.minus.push_back(h_inf(b));
    sc.surrogate_plus.push_back(surrogate(a));
    sc.surrogate_minus.push_back(surrogate(b));
    xp.push_back(std::log(std::abs(sc.surrogate_plus.back())));
    xm.push_back(std::log(std::abs(sc.surrogate_minus.back())));
    ld.push_back(std::log(off));
  }
  if (sc.d == 2) {
    ComplexFit a = complex_local_fit(xp, offsets, sc.plus), b = complex_local_fit(xm, offsets, sc.minus);
    sc.slope_plus = a.slope;
    sc.slope_minus = b.slope;
    sc.r2_plus = a.r2;
    sc.r2_minus = b.r2;
    sc.slope_se_plus = a.se;
    sc.slope_se_minus = b.se;
  } else {
    const cplx c = h_inf(sc.crossing);
    std::vector<double> yp, ym;
    for (size_t k = 0; k < offsets.size(); ++k) {
      yp.push_back(std::log(std::abs(sc.plus[k] - c)));
      ym.push_back(std::log(std::abs(sc.minus[k] - c)));
    }
    sc.holder_plus = line_fit(ld, yp).c1;
    sc.holder_minus = line_fit(ld, ym).c1;
  }
  return sc;
}

}  // namespace rlab
