#include "lightning/least_squares.hpp"

#include <cmath>

namespace lightning::linalg {

template <class Scalar>
LeastSquaresResult<Scalar> solve_least_squares(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b, std::span<const double> row_weights) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index rows = A.rows();
  const Eigen::Index cols = A.cols();
  if (rows != b.rows()) throw Error("least squares: dimension mismatch");
  if (!row_weights.empty() && static_cast<Eigen::Index>(row_weights.size()) != rows) {
    throw Error("least squares: weight count mismatch");
  }
  if (rows < cols) throw Error("least squares: fewer rows than columns");

  Matrix M = A;
  Vector rhs = b;
  if (!row_weights.empty()) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      M.row(i) *= row_weights[static_cast<std::size_t>(i)];
      rhs(i) *= row_weights[static_cast<std::size_t>(i)];
    }
  }
  Eigen::VectorXd scale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double n = M.col(j).norm();
    scale(j) = n > 0.0 ? 1.0 / n : 1.0;
    M.col(j) *= scale(j);
  }

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
  LeastSquaresResult<Scalar> out;
  out.rank = static_cast<int>(cod.rank());
  Vector x = cod.solve(rhs);
  out.residual_norm = (M * x - rhs).norm();
  for (Eigen::Index j = 0; j < cols; ++j) x(j) *= scale(j);
  out.coeffs = x;

  const Vector r = A * x - b;
  double sum = 0.0;
  double mx = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double a = std::abs(r(i));
    sum += a * a;
    mx = std::max(mx, a);
  }
  out.residual_rms = rows > 0 ? std::sqrt(sum / double(rows)) : 0.0;
  out.residual_max = mx;
  return out;
}

template LeastSquaresResult<double> solve_least_squares<double>(
    const Eigen::MatrixXd&, const Eigen::VectorXd&, std::span<const double>);
template LeastSquaresResult<Complex> solve_least_squares<Complex>(
    const Eigen::MatrixXcd&, const Eigen::VectorXcd&, std::span<const double>);

}  // namespace lightning::linalg
