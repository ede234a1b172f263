#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "causalshift/errors.hpp"

namespace causalshift {

template <class Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <class Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// Solves A x = b for a 3x3 system by full-pivot LU.
///
/// Throws SingularMatrixError (carrying det A) when |det A| is below
/// 1e-12 times the product of the row norms.
template <class Scalar>
Vector3<Scalar> solve_linear(const Matrix3<Scalar>& a, const Vector3<Scalar>& b) {
  using std::abs;
  const Scalar det = a.determinant();
  const Scalar scale = a.row(0).norm() * a.row(1).norm() * a.row(2).norm();
  if (!(abs(det) > Scalar(1e-12) * scale)) {
    std::ostringstream msg;
    msg << "singular 3x3 system (det = " << static_cast<double>(det) << ")";
    throw SingularMatrixError(msg.str(), static_cast<double>(det));
  }
  Eigen::FullPivLU<Matrix3<Scalar>> lu(a);
  Vector3<Scalar> x = lu.solve(b);
  // One step of iterative refinement.
  x += lu.solve(b - a * x);
  return x;
}

}  // namespace causalshift
