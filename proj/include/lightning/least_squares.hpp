#pragma once

#include <Eigen/Dense>
#include <span>

#include "lightning/common.hpp"

namespace lightning::linalg {

template <class Scalar>
struct LeastSquaresResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coeffs;
  double residual_norm = 0.0;  // weighted 2-norm of A x - b
  double residual_rms = 0.0;   // unweighted RMS over rows
  double residual_max = 0.0;   // unweighted max over rows
  int rank = 0;
};

// min || W (A x - b) ||_2 with W = diag(row_weights) (empty means identity).
// Columns are normalised to unit norm before a complete orthogonal
// decomposition, so rank-deficient systems return the minimum-norm solution.
template <class Scalar>
LeastSquaresResult<Scalar> solve_least_squares(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, std::span<const double> row_weights = {});

}  // namespace lightning::linalg
