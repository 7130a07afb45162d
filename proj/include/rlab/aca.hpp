#pragma once

#include "rlab/common.hpp"

#include <functional>

namespace rlab {

// M ~ U V^T
struct LowRank {
  Mat U, V;
  double max_error = 0.0;  // certified over every entry
  Eigen::Index rank() const { return U.cols(); }
};

struct AcaOptions {
  double tol = 1e-9;    // stop when |u_k||v_k| <= tol |S_k|_F
  int max_rank = 64;
  bool certify = true;  // scan all entries for the max error
};

// Adaptive cross approximation with partial pivoting. `entry(i, j)` is
// evaluated on demand; rows x cols entries are touched only when certifying.
LowRank aca(const std::function<double(Eigen::Index, Eigen::Index)>& entry, Eigen::Index rows, Eigen::Index cols,
            const AcaOptions& opt = {});

}  // namespace rlab
