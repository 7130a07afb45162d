#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace rlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

// Input outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Operation not available for this kind of object (e.g. non-radial triple).
struct Unsupported : std::logic_error {
  using std::logic_error::logic_error;
};

// A numerical precondition failed (aliasing, step size, ...). The message
// carries a remediation hint.
struct NumericalRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace rlab
