#include "rlab/aca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace rlab {

LowRank aca(const std::function<double(Eigen::Index, Eigen::Index)>& entry, Eigen::Index rows, Eigen::Index cols,
            const AcaOptions& opt) {
  std::vector<Vec> us, vs;
  std::vector<char> used_row(rows, 0);
  double frob2 = 0.0;  // |S_k|_F^2 of the running approximation
  if (rows == 0 || cols == 0) return {};
  // start mid-matrix (grid centre for frequency-indexed kernels) and hop with
  // a stride coprime to rows, so zero rows near compact supports are skipped fast
  Eigen::Index i = rows / 2;
  Eigen::Index stride = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(0.618 * static_cast<double>(rows)));
  while (std::gcd(stride, rows) != 1) ++stride;
  int misses = 0;

  while (static_cast<int>(us.size()) < opt.max_rank) {
    used_row[i] = 1;
    Vec r(cols);
    for (Eigen::Index j = 0; j < cols; ++j) r(j) = entry(i, j);
    for (size_t k = 0; k < us.size(); ++k) r -= us[k](i) * vs[k];

    Eigen::Index j;
    double piv = r.cwiseAbs().maxCoeff(&j);
    if (piv == 0.0) {
      // zero residual row; try another unused row before giving up
      Eigen::Index next = -1;
      for (Eigen::Index k = 1; k <= rows; ++k)
        if (!used_row[(i + k * stride) % rows]) {
          next = (i + k * stride) % rows;
          break;
        }
      if (next < 0 || ++misses > 64) break;
      i = next;
      continue;
    }
    misses = 0;
    Vec v = r / r(j);
    Vec u(rows);
    for (Eigen::Index k = 0; k < rows; ++k) u(k) = entry(k, j);
    for (size_t k = 0; k < us.size(); ++k) u -= vs[k](j) * us[k];

    double nu = u.norm(), nv = v.norm();
    double cross = 0.0;
    for (size_t k = 0; k < us.size(); ++k) cross += us[k].dot(u) * vs[k].dot(v);
    frob2 += 2.0 * cross + nu * nu * nv * nv;
    us.push_back(u);
    vs.push_back(v);
    if (nu * nv <= opt.tol * std::sqrt(std::max(frob2, 0.0))) break;

    // next pivot row: largest |u| among unused rows
    double best = -1.0;
    Eigen::Index next = -1;
    for (Eigen::Index k = 0; k < rows; ++k)
      if (!used_row[k] && std::abs(u(k)) > best) {
        best = std::abs(u(k));
        next = k;
      }
    if (next < 0) break;
    i = next;
  }

  LowRank out;
  out.U.resize(rows, static_cast<Eigen::Index>(us.size()));
  out.V.resize(cols, static_cast<Eigen::Index>(vs.size()));
  for (size_t k = 0; k < us.size(); ++k) {
    out.U.col(k) = us[k];
    out.V.col(k) = vs[k];
  }
  if (opt.certify) {
    double err = 0.0;
    for (Eigen::Index a = 0; a < rows; ++a) {
      Vec approx = out.V * out.U.row(a).transpose();
      for (Eigen::Index b = 0; b < cols; ++b) err = std::max(err, std::abs(entry(a, b) - approx(b)));
    }
    out.max_error = err;
  }
  return out;
}

}  // namespace rlab
