#include "rlab/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <cmath>

namespace rlab {

namespace {

constexpr cplx I(0.0, 1.0);

Eigen::Index ipow(int n, int d) {
  Eigen::Index s = 1;
  for (int k = 0; k < d; ++k) s *= n;
  return s;
}

// In-place unscaled n-D DFT over a row-major cube of side n.
void fft_nd(std::vector<cplx>& data, int d, int n, bool inverse) {
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<cplx> line(n), out(n);
  const Eigen::Index total = ipow(n, d);
  for (int axis = 0; axis < d; ++axis) {
    const Eigen::Index stride = ipow(n, d - 1 - axis);
    for (Eigen::Index base = 0; base < total; ++base) {
      if ((base / stride) % n != 0) continue;  // one start per line
      for (int k = 0; k < n; ++k) line[k] = data[base + k * stride];
      if (inverse)
        fft.inv(out, line);
      else
        fft.fwd(out, line);
      for (int k = 0; k < n; ++k) data[base + k * stride] = out[k];
    }
  }
}

// (-1)^(sum of indices)
double parity(const std::vector<int>& idx) {
  int s = 0;
  for (int v : idx) s += v;
  return (s % 2) ? -1.0 : 1.0;
}

// Flat index of output o = i + j - n/2 per axis (eta index i, zeta index j).
struct PairIndex {
  const SpectralGrid& g;
  std::vector<std::array<int, 3>> multi;
  explicit PairIndex(const SpectralGrid& grid) : g(grid), multi(grid.size()) {
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      auto m = grid.multi(k);
      for (int a = 0; a < grid.dim(); ++a) multi[k][a] = m[a];
    }
  }
  // zeta index for output o and input i, or -1
  Eigen::Index zeta(Eigen::Index o, Eigen::Index i) const {
    const int n = g.n();
    Eigen::Index f = 0;
    for (int a = 0; a < g.dim(); ++a) {
      int j = multi[o][a] - multi[i][a] + n / 2;
      if (j < 0 || j >= n) return -1;
      f = f * n + j;
    }
    return f;
  }
};

}  // namespace

SpectralGrid::SpectralGrid(int d, int n, double xi_max) : d_(d), n_(n), xi_max_(xi_max) {
  if (d != 2 && d != 3) throw DomainError("grid dimension must be 2 or 3");
  if (n < 2 || n % 2 != 0) throw DomainError("grid size n must be even");
  if (!(xi_max > 0)) throw DomainError("xi_max must be positive");
  dxi_ = 2.0 * xi_max / n;
  size_ = ipow(n, d);
}

double SpectralGrid::weight() const { return std::pow(dxi_, d_); }

std::vector<int> SpectralGrid::multi(Eigen::Index flat) const {
  std::vector<int> idx(d_);
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

Eigen::Index SpectralGrid::flat(const std::vector<int>& idx) const {
  Eigen::Index f = 0;
  for (int a = 0; a < d_; ++a) f = f * n_ + idx[a];
  return f;
}

Vec SpectralGrid::point(Eigen::Index flat) const {
  auto idx = multi(flat);
  Vec p(d_);
  for (int a = 0; a < d_; ++a) p(a) = (idx[a] - n_ / 2) * dxi_;
  return p;
}

Vec SpectralGrid::x_point(Eigen::Index flat) const {
  auto idx = multi(flat);
  Vec p(d_);
  for (int a = 0; a < d_; ++a) p(a) = (idx[a] - n_ / 2) * dx();
  return p;
}

Eigen::Index SpectralGrid::locate(const Vec& xi, double tol) const {
  if (xi.size() != d_) return -1;
  std::vector<int> idx(d_);
  for (int a = 0; a < d_; ++a) {
    double k = xi(a) / dxi_ + n_ / 2;
    double r = std::round(k);
    if (std::abs(k - r) > tol || r < 0 || r >= n_) return -1;
    idx[a] = static_cast<int>(r);
  }
  return flat(idx);
}

std::string to_string(FieldRole r) {
  switch (r) {
    case FieldRole::F: return "f_hat";
    case FieldRole::G: return "g_hat";
    case FieldRole::H: return "h_hat";
    case FieldRole::U: return "u_hat";
  }
  return "?";
}

SpectralField::SpectralField(SpectralGrid g, FieldRole r) : grid(g), values(CVec::Zero(g.size())), role(r) {}

SpectralField SpectralField::from_function(const SpectralGrid& g, const std::function<cplx(const Vec&)>& f,
                                           FieldRole r) {
  SpectralField F(g, r);
  for (Eigen::Index k = 0; k < g.size(); ++k) F.values(k) = f(g.point(k));
  return F;
}

double SpectralField::l2() const { return std::sqrt(values.squaredNorm() * grid.weight()); }
double SpectralField::l1() const { return values.cwiseAbs().sum() * grid.weight(); }
double SpectralField::sup() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }

double SpectralField::support_radius(double rel) const {
  const double top = sup();
  if (top == 0.0) return 0.0;
  double r = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (std::abs(values(k)) > rel * top) r = std::max(r, grid.point(k).lpNorm<Eigen::Infinity>());
  return r;
}

CVec to_physical(const SpectralField& F) {
  const auto& g = F.grid;
  std::vector<cplx> buf(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) buf[k] = parity(g.multi(k)) * F.values(k);
  fft_nd(buf, g.dim(), g.n(), true);
  const double half = ((g.n() / 2) % 2) ? -1.0 : 1.0;
  const double pre = std::pow(half, g.dim()) * g.weight() / std::pow(2.0 * kPi, 0.5 * g.dim());
  CVec out(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) out(k) = pre * parity(g.multi(k)) * buf[k];
  return out;
}

SpectralField from_physical(const SpectralGrid& g, const CVec& values, FieldRole r) {
  if (values.size() != g.size()) throw DomainError("physical field size does not match grid");
  std::vector<cplx> buf(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) buf[k] = parity(g.multi(k)) * values(k);
  fft_nd(buf, g.dim(), g.n(), false);
  const double half = ((g.n() / 2) % 2) ? -1.0 : 1.0;
  const double pre = std::pow(half, g.dim()) * std::pow(g.dx(), g.dim()) / std::pow(2.0 * kPi, 0.5 * g.dim());
  SpectralField F(g, r);
  for (Eigen::Index k = 0; k < g.size(); ++k) F.values(k) = pre * parity(g.multi(k)) * buf[k];
  return F;
}

double physical_l2(const SpectralGrid& g, const CVec& values) {
  return std::sqrt(values.squaredNorm() * std::pow(g.dx(), g.dim()));
}

bool SupportBox::contains(const Vec& xi_, const Vec& eta_) const {
  if (xi_.lpNorm<Eigen::Infinity>() > xi) return false;
  if (eta_.lpNorm<Eigen::Infinity>() > eta) return false;
  if (std::isfinite(zeta) && (xi_ - eta_).lpNorm<Eigen::Infinity>() > zeta) return false;
  return true;
}

BilinearSymbol::BilinearSymbol(Fn m, SupportBox box, std::string label)
    : m_(std::move(m)), box_(box), label_(std::move(label)) {}

BilinearSymbol BilinearSymbol::constant(double value) {
  BilinearSymbol s([value](const Vec&, const Vec&) { return value; }, {}, "constant");
  SeparatedForm f;
  f.rank = 1;
  f.p = [value](int, const Vec&) { return value; };
  f.q = [](int, const Vec&) { return 1.0; };
  s.sep_ = f;
  s.zero_ = value == 0.0;
  return s;
}

BilinearSymbol BilinearSymbol::zero() { return constant(0.0); }

double BilinearSymbol::operator()(const Vec& xi, const Vec& eta) const {
  if (!box_.contains(xi, eta)) return 0.0;
  return m_(xi, eta);
}

BilinearSymbol BilinearSymbol::with_separated(SeparatedForm s) const {
  BilinearSymbol out = *this;
  out.sep_ = std::move(s);
  return out;
}

BilinearSymbol BilinearSymbol::with_aca(const SpectralGrid& g, const AcaOptions& opt) const {
  std::vector<Vec> pts(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) pts[k] = g.point(k);
  auto entry = [&](Eigen::Index i, Eigen::Index j) { return (*this)(pts[i] + pts[j], pts[i]); };
  auto lr = std::make_shared<LowRank>(aca(entry, g.size(), g.size(), opt));
  SeparatedForm f;
  f.rank = static_cast<int>(lr->rank());
  f.max_error = lr->max_error;
  f.p = [lr, g](int k, const Vec& eta) {
    auto i = g.locate(eta);
    if (i < 0) throw DomainError("cross-approximated symbol evaluated off its grid");
    return lr->U(i, k);
  };
  f.q = [lr, g](int k, const Vec& zeta) {
    auto j = g.locate(zeta);
    if (j < 0) throw DomainError("cross-approximated symbol evaluated off its grid");
    return lr->V(j, k);
  };
  return with_separated(f);
}

void check_aliasing(const BilinearSymbol& m, const SpectralField& F, const SpectralField& G) {
  if (!(F.grid == G.grid)) throw DomainError("fields live on different grids");
  const double X = F.grid.xi_max();
  const double rF = std::min(F.support_radius(), m.support().eta);
  const double rG = std::min(G.support_radius(), m.support().zeta);
  const double rOut = std::min(rF + rG, m.support().xi);
  if (rF > 0.75 * X || rG > 0.75 * X || rOut > X) {
    throw NumericalRefusal("aliasing: input supports " + std::to_string(rF) + ", " + std::to_string(rG) +
                           " and output support " + std::to_string(rOut) + " exceed the anti-aliasing margin of box " +
                           std::to_string(X) + "; enlarge xi_max or truncate the data/symbol");
  }
}

SpectralField pseudo_product(const BilinearSymbol& m, const SpectralField& F, const SpectralField& G,
                             ProductMode mode) {
  check_aliasing(m, F, G);
  const auto& g = F.grid;
  SpectralField out(g, FieldRole::H);
  if (m.is_zero()) return out;
  const int d = g.dim(), n = g.n();

  if (mode == ProductMode::Direct) {
    PairIndex pix(g);
    std::vector<Vec> pts(g.size());
    for (Eigen::Index k = 0; k < g.size(); ++k) pts[k] = g.point(k);
    std::vector<Eigen::Index> nzF;
    for (Eigen::Index i = 0; i < g.size(); ++i)
      if (F.values(i) != 0.0) nzF.push_back(i);
    for (Eigen::Index o = 0; o < g.size(); ++o) {
      cplx acc = 0.0;
      for (Eigen::Index i : nzF) {
        Eigen::Index j = pix.zeta(o, i);
        if (j < 0 || G.values(j) == 0.0) continue;
        acc += m(pts[o], pts[i]) * F.values(i) * G.values(j);
      }
      out.values(o) = acc * g.weight();
    }
    return out;
  }

  if (!m.separated()) throw DomainError("separated mode needs a separated symbol form");
  const auto& sep = *m.separated();
  const int M = 2 * n;
  const Eigen::Index total = ipow(M, d);
  auto padded = [&](Eigen::Index k) {
    auto idx = g.multi(k);
    Eigen::Index f = 0;
    for (int a = 0; a < d; ++a) f = f * M + idx[a];
    return f;
  };
  std::vector<Eigen::Index> pad(g.size());
  std::vector<Vec> pts(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    pad[k] = padded(k);
    pts[k] = g.point(k);
  }
  std::vector<cplx> acc(total, 0.0), P(total), Q(total);
  for (int r = 0; r < sep.rank; ++r) {
    std::fill(P.begin(), P.end(), 0.0);
    std::fill(Q.begin(), Q.end(), 0.0);
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      if (F.values(k) != 0.0 && pts[k].lpNorm<Eigen::Infinity>() <= m.support().eta)
        P[pad[k]] = sep.p(r, pts[k]) * F.values(k);
      if (G.values(k) != 0.0 && pts[k].lpNorm<Eigen::Infinity>() <= m.support().zeta)
        Q[pad[k]] = sep.q(r, pts[k]) * G.values(k);
    }
    fft_nd(P, d, M, false);
    fft_nd(Q, d, M, false);
    for (Eigen::Index k = 0; k < total; ++k) acc[k] += P[k] * Q[k];
  }
  fft_nd(acc, d, M, true);
  const double scale = g.weight() / static_cast<double>(total);
  for (Eigen::Index o = 0; o < g.size(); ++o) {
    auto idx = g.multi(o);
    Eigen::Index f = 0;
    for (int a = 0; a < d; ++a) f = f * M + (idx[a] + n / 2);
    double w = sep.outer ? sep.outer(pts[o]) : 1.0;
    if (pts[o].lpNorm<Eigen::Infinity>() > m.support().xi) w = 0.0;
    out.values(o) = w * scale * acc[f];
  }
  return out;
}

SpectralField propagate(const Dispersion& a, double t, const SpectralField& F) {
  SpectralField out = F;
  if (t == 0.0) return out;
  for (Eigen::Index k = 0; k < F.grid.size(); ++k)
    out.values(k) *= std::exp(I * (t * a.value(F.grid.point(k))));
  return out;
}

double phase_bound(const PhaseTriple& triple, const BilinearSymbol& m, const SpectralField& F,
                   const SpectralField& G) {
  const auto& g = F.grid;
  const double thr = 1e-12;
  const double rF = std::min(F.support_radius(thr), m.support().eta);
  const double rG = std::min(G.support_radius(thr), m.support().zeta);
  const double rOut = std::min(rF + rG, m.support().xi);
  double ma = 0, mb = 0, mc = 0;
  const double topF = F.sup(), topG = G.sup();
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    Vec p = g.point(k);
    double r = p.lpNorm<Eigen::Infinity>();
    if (r <= rOut) ma = std::max(ma, std::abs(triple.a.value(p)));
    if (r <= rF && std::abs(F.values(k)) > thr * topF) mb = std::max(mb, std::abs(triple.b.value(p)));
    if (r <= rG && std::abs(G.values(k)) > thr * topG) mc = std::max(mc, std::abs(triple.c.value(p)));
  }
  return ma + mb + mc;
}

std::vector<SpectralField> duhamel_evolve(const PhaseTriple& triple, const BilinearSymbol& m, const SpectralField& F,
                                          const SpectralField& G, const EvolveOptions& opt) {
  if (!(opt.t_max > 0) || opt.steps < 1) throw DomainError("evolve needs t_max > 0 and steps >= 1");
  std::vector<double> snaps = opt.snapshots.empty() ? std::vector<double>{opt.t_max} : opt.snapshots;
  for (size_t k = 0; k < snaps.size(); ++k) {
    if (!(snaps[k] > 0) || snaps[k] > opt.t_max * (1 + 1e-12) || (k && snaps[k] <= snaps[k - 1]))
      throw DomainError("snapshots must be increasing and lie in (0, t_max]");
  }
  const double h = opt.t_max / opt.steps;
  const auto& g = F.grid;
  std::vector<SpectralField> out;
  if (m.is_zero()) {
    for (size_t k = 0; k < snaps.size(); ++k) out.emplace_back(g, FieldRole::H);
    return out;
  }
  check_aliasing(m, F, G);
  const double bound = phase_bound(triple, m, F, G);
  if (h * bound > 0.5) {
    int need = static_cast<int>(std::ceil(2.0 * opt.t_max * bound));
    throw NumericalRefusal("step " + std::to_string(h) + " exceeds 0.5/max|phi| = " + std::to_string(0.5 / bound) +
                           "; use steps >= " + std::to_string(need));
  }
  const ProductMode mode = opt.mode.value_or(m.separated() ? ProductMode::Separated : ProductMode::Direct);

  auto rhs = [&](double t) {
    SpectralField v = propagate(triple.b, t, F);
    SpectralField w = propagate(triple.c, t, G);
    return propagate(triple.a, -t, pseudo_product(m, v, w, mode)).values;
  };

  CVec state = CVec::Zero(g.size());
  double t = 0.0;
  CVec k1 = rhs(0.0);
  for (double target : snaps) {
    const double span = target - t;
    const int n = std::max(1, static_cast<int>(std::ceil(span / h - 1e-9)));
    const double dt = span / n;
    for (int s = 0; s < n; ++s) {
      // the right-hand side does not depend on h, so k2 = k3
      CVec k2 = rhs(t + 0.5 * dt);
      CVec k4 = rhs(t + dt);
      state += (dt / 6.0) * (k1 + 4.0 * k2 + k4);
      t += dt;
      k1 = std::move(k4);
    }
    t = target;
    SpectralField snap(g, FieldRole::H);
    snap.values = state;
    out.push_back(std::move(snap));
  }
  return out;
}

std::vector<cplx> evaluate_u(const SpectralField& h, const Dispersion& a, double t, const std::vector<Vec>& points) {
  const auto& g = h.grid;
  std::vector<Vec> xi;
  std::vector<cplx> amp;
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (h.values(k) == 0.0) continue;
    Vec p = g.point(k);
    amp.push_back(h.values(k) * std::exp(I * (t * a.value(p))));
    xi.push_back(std::move(p));
  }
  const double pre = g.weight() / std::pow(2.0 * kPi, 0.5 * g.dim());
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const Vec& x : points) {
    if (x.size() != g.dim() || !x.allFinite()) throw DomainError("evaluation point must be finite and match d");
    cplx acc = 0.0;
    for (size_t k = 0; k < xi.size(); ++k) acc += std::exp(I * x.dot(xi[k])) * amp[k];
    out.push_back(pre * acc);
  }
  return out;
}

ProfileLimit profile_limit(const PhaseTriple& triple, const BilinearSymbol& m, const SpectralField& F,
                           const SpectralField& G, std::vector<double> eps, double rel_tol) {
  if (eps.empty()) throw DomainError("profile_limit needs at least one damping value");
  for (size_t k = 0; k < eps.size(); ++k)
    if (!(eps[k] > 0) || (k && eps[k] >= eps[k - 1]))
      throw DomainError("damping sequence must be positive and decreasing");
  check_aliasing(m, F, G);
  const auto& g = F.grid;
  const Eigen::Index N = g.size();
  PairIndex pix(g);
  std::vector<Vec> pts(N);
  Vec av(N), bv(N), cv(N);
  for (Eigen::Index k = 0; k < N; ++k) {
    pts[k] = g.point(k);
    av(k) = triple.a.value(pts[k]);
    bv(k) = triple.b.value(pts[k]);
    cv(k) = triple.c.value(pts[k]);
  }
  std::vector<Eigen::Index> nzF;
  for (Eigen::Index i = 0; i < N; ++i)
    if (F.values(i) != 0.0) nzF.push_back(i);

  const size_t L = eps.size();
  ProfileLimit res{SpectralField(g, FieldRole::H), std::vector<char>(N, 1), Vec::Zero(N), eps};
  std::vector<cplx> vals(L);
  for (Eigen::Index o = 0; o < N; ++o) {
    std::fill(vals.begin(), vals.end(), 0.0);
    bool any = false;
    for (Eigen::Index i : nzF) {
      Eigen::Index j = pix.zeta(o, i);
      if (j < 0 || G.values(j) == 0.0) continue;
      double mv = m(pts[o], pts[i]);
      if (mv == 0.0) continue;
      any = true;
      cplx A = mv * F.values(i) * G.values(j);
      double ph = -av(o) + bv(i) + cv(j);
      for (size_t l = 0; l < L; ++l) vals[l] -= A / (I * ph - eps[l]);
    }
    if (!any) continue;
    // Neville extrapolation to eps = 0
    std::vector<cplx> P(vals.begin(), vals.end());
    cplx prev = P[L - 1];
    for (size_t lev = 1; lev < L; ++lev) {
      for (size_t k = 0; k + lev < L; ++k)
        P[k] = (eps[k] * P[k + 1] - eps[k + lev] * P[k]) / (eps[k] - eps[k + lev]);
      if (lev + 2 == L) prev = P[1];  // extrapolation from the smaller damping values only
    }
    const double w = g.weight();
    res.h_inf.values(o) = P[0] * w;
    res.extrapolation_error(o) = std::abs(P[0] - prev) * w;
    res.converged[o] = res.extrapolation_error(o) <= rel_tol * std::max(std::abs(P[0]) * w, 1e-300) ? 1 : 0;
  }
  return res;
}

}  // namespace rlab
