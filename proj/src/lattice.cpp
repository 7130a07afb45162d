// Built with reassociating math and -fopenmp-simd so the inner sums vectorize (libmvec sin).
#include "rlab/interaction.hpp"

#include <algorithm>
#include <cmath>

namespace rlab {

namespace {

struct Table {
  int n = 0, K = 0;
  std::vector<double> amp, disp, x, y;
  std::vector<std::vector<double>> fac;  // separated factors, one row per rank
  std::vector<int> lo, hi;               // nonzero column range per row
};

Table build_table(const std::function<double(const Vec&)>& data, const Dispersion& disp, const Vec& center,
                  double step, double radius, double threshold, int rank,
                  const std::function<double(int, const Vec&)>& factor) {
  Table T;
  T.K = static_cast<int>(std::ceil(radius / step));
  T.n = 2 * T.K + 1;
  const size_t N = static_cast<size_t>(T.n) * T.n;
  T.amp.assign(N, 0.0);
  T.disp.assign(N, 0.0);
  T.x.assign(N, 0.0);
  T.y.assign(N, 0.0);
  T.fac.assign(rank, std::vector<double>(N, 0.0));
  T.lo.assign(T.n, T.n);
  T.hi.assign(T.n, -1);
  double top = 0.0;
  Vec p(2);
  for (int a = 0; a < T.n; ++a)
    for (int c = 0; c < T.n; ++c) {
      p << center(0) + (a - T.K) * step, center(1) + (c - T.K) * step;
      const size_t k = static_cast<size_t>(a) * T.n + c;
      T.amp[k] = data(p);
      top = std::max(top, std::abs(T.amp[k]));
    }
  for (int a = 0; a < T.n; ++a)
    for (int c = 0; c < T.n; ++c) {
      const size_t k = static_cast<size_t>(a) * T.n + c;
      if (std::abs(T.amp[k]) < threshold * top) {
        T.amp[k] = 0.0;
        continue;
      }
      p << center(0) + (a - T.K) * step, center(1) + (c - T.K) * step;
      T.disp[k] = disp.value(p);
      T.x[k] = p(0);
      T.y[k] = p(1);
      for (int r = 0; r < rank; ++r) T.fac[r][k] = factor(r, p);
      T.lo[a] = std::min(T.lo[a], c);
      T.hi[a] = std::max(T.hi[a], c);
    }
  return T;
}

// sum over one eta row of A (sin(t ph) + i (1 - cos(t ph))) / ph
template <int R>
void row_sum(const Table& F, const Table& G, int a, int za, int c0, int c1, int J, double ax, double t, double& sr,
             double& si) {
  const double* Fa = &F.amp[static_cast<size_t>(a) * F.n];
  const double* Ta = &F.disp[static_cast<size_t>(a) * F.n];
  const double* Gz = &G.amp[static_cast<size_t>(za) * G.n];
  const double* Tz = &G.disp[static_cast<size_t>(za) * G.n];
  const double* Pa[R > 0 ? R : 1];
  const double* Qz[R > 0 ? R : 1];
  for (int r = 0; r < R; ++r) {
    Pa[r] = &F.fac[r][static_cast<size_t>(a) * F.n];
    Qz[r] = &G.fac[r][static_cast<size_t>(za) * G.n];
  }
  double lsr = 0.0, lsi = 0.0;
#pragma omp simd reduction(+ : lsr, lsi)
  for (int c = c0; c <= c1; ++c) {
    const int zc = J - c;
    double m = 0.0;
    for (int r = 0; r < R; ++r) m += Pa[r][c] * Qz[r][zc];
    const double A = Fa[c] * Gz[zc] * m;
    const double ph = ax + Ta[c] + Tz[zc];
    const double ar = t * ph;
    const double s = std::sin(ar), hs = std::sin(0.5 * ar);
    // Taylor branch near ph = 0, where the kernel tends to t
    const bool tiny = std::abs(ar) < 1e-4;
    const double inv = 1.0 / (tiny ? 1.0 : ph);
    lsr += A * (tiny ? t * (1.0 - ar * ar / 6.0) : s * inv);
    lsi += A * (tiny ? 0.5 * t * ar : 2.0 * hs * hs * inv);
  }
  sr += lsr;
  si += lsi;
}

using RowFn = void (*)(const Table&, const Table&, int, int, int, int, int, double, double, double&, double&);

RowFn row_kernel(int rank) {
  switch (rank) {
    case 1: return &row_sum<1>;
    case 2: return &row_sum<2>;
    case 3: return &row_sum<3>;
    case 4: return &row_sum<4>;
    case 5: return &row_sum<5>;
    case 6: return &row_sum<6>;
    default: throw Unsupported("lattice backend supports separated ranks 1..6");
  }
}

}  // namespace

LatticeInteraction::LatticeInteraction(LatticeSetup setup) : s_(std::move(setup)) {
  if (s_.triple.dim() != 2) throw Unsupported("lattice backend is two-dimensional");
  if (!s_.f || !s_.g || !s_.symbol.p || !s_.symbol.q) throw DomainError("lattice setup needs data and a separated symbol");
  row_kernel(s_.symbol.rank);
  if (s_.mirror && (s_.f_center(1) != 0.0 || s_.g_center(1) != 0.0))
    throw DomainError("mirror symmetry needs data centers on the xi_1 axis");
}

LatticeProfile LatticeInteraction::profile(double t) const {
  if (!(t > 0)) throw DomainError("lattice profile needs t > 0");
  const auto& s = s_;
  LatticeProfile out;
  out.t = t;
  const double de = std::min(s.max_step, 2.0 * kPi / (t * s.grid_factor_eta + s.grid_offset));
  const double dx0 = std::min(s.max_step, 2.0 * kPi / (t * s.grid_factor_xi + s.grid_offset));
  const int kx = std::max(1, static_cast<int>(std::floor(dx0 / de)));
  const double dx = kx * de;
  out.d_eta = de;
  out.d_xi = dx;

  const int rank = s.symbol.rank;
  const Table F = build_table(s.f, s.triple.b, s.f_center, de, s.data_radius, s.amp_threshold, rank, s.symbol.p);
  const Table G = build_table(s.g, s.triple.c, s.g_center, de, s.data_radius, s.amp_threshold, rank, s.symbol.q);
  const RowFn kernel = row_kernel(rank);
  const Vec base = s.f_center + s.g_center;
  const int Kx = static_cast<int>(std::ceil((s.xi_radius + (s.xi_center - base).norm()) / dx));
  const int jlo = s.mirror ? 0 : -Kx;

  Vec xi(2);
  for (int i = -Kx; i <= Kx; ++i)
    for (int j = jlo; j <= Kx; ++j) {
      xi << base(0) + i * dx, base(1) + j * dx;
      if ((xi - s.xi_center).norm() > s.xi_radius) continue;
      const double outer = s.symbol.outer ? s.symbol.outer(xi) : 1.0;
      if (outer == 0.0) continue;
      const double ax = -s.triple.a.value(xi);
      // zeta index = (i kx - (a - K_F)) + K_G per axis
      const int I0 = i * kx + F.K + G.K, J0 = j * kx + F.K + G.K;
      double sr = 0.0, si = 0.0;
      for (int a = std::max(0, I0 - (G.n - 1)); a <= std::min(F.n - 1, I0); ++a) {
        const int za = I0 - a;
        if (F.hi[a] < 0 || G.hi[za] < 0) continue;
        const int c0 = std::max(F.lo[a], J0 - G.hi[za]);
        const int c1 = std::min(F.hi[a], J0 - G.lo[za]);
        if (c1 < c0) continue;
        kernel(F, G, a, za, c0, c1, J0, ax, t, sr, si);
        out.pairs += c1 - c0 + 1;
      }
      out.xi.push_back(xi);
      out.h.push_back(cplx(sr, si) * (outer * de * de));
      out.mirrored.push_back(s.mirror && j > 0 ? 1 : 0);
    }
  return out;
}

std::vector<cplx> LatticeInteraction::evaluate(const LatticeProfile& p, const std::vector<Vec>& x) const {
  std::vector<cplx> amp(p.xi.size());
  for (size_t k = 0; k < p.xi.size(); ++k)
    amp[k] = p.h[k] * std::polar(1.0, p.t * s_.triple.a.value(p.xi[k]));
  const double pre = p.d_xi * p.d_xi / (2.0 * kPi);
  std::vector<cplx> out;
  for (const Vec& X : x) {
    cplx acc = 0.0;
    for (size_t k = 0; k < p.xi.size(); ++k) {
      const double ph = X(0) * p.xi[k](0) + X(1) * p.xi[k](1);
      acc += std::polar(1.0, ph) * amp[k];
      if (p.mirrored[k]) acc += std::polar(1.0, X(0) * p.xi[k](0) - X(1) * p.xi[k](1)) * amp[k];
    }
    out.push_back(pre * acc);
  }
  return out;
}

}  // namespace rlab
