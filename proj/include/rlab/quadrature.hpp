#pragma once

#include "rlab/common.hpp"

#include <functional>

namespace rlab {

struct QuadResult {
  cplx value{0.0, 0.0};
  double error = 0.0;
  int panels = 0;
};

struct QuadOptions {
  double tol = 1e-12;     // relative to the L1 norm of f on the interval
  unsigned max_depth = 18;
};

// Adaptive Gauss-Kronrod (31 points) of a complex integrand on [a, b].
QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, const QuadOptions& opt = {});

// Oscillation-aware variant: [a, b] is first cut into panels of length at most
// pi / (omega(x) + 1), omega being the local angular frequency of f.
QuadResult integrate_oscillatory(const std::function<cplx(double)>& f, const std::function<double(double)>& omega,
                                 double a, double b, const QuadOptions& opt = {});

}  // namespace rlab
