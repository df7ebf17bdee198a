#include "rllink/markov.hpp"

#include <stdexcept>

#include "rllink/errors.hpp"

namespace rllink {

bool is_row_stochastic(const Eigen::MatrixXd& T, double tol) {
  if (T.rows() != T.cols() || T.rows() == 0) return false;
  if ((T.array() < -tol).any()) return false;
  return (T.rowwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
}

namespace {

Eigen::VectorXd cesaro_stationary(const Eigen::MatrixXd& T) {
  const int n = static_cast<int>(T.rows());
  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(n, 1.0 / n);
  Eigen::RowVectorXd avg = pi;
  Eigen::RowVectorXd prev_avg = avg;
  for (int it = 1; it <= 200000; ++it) {
    Eigen::RowVectorXd next = pi * T;
    // A plain fixed point beats the O(1/n) Cesaro average when iteration
    // converges at all; the average only matters for periodic chains.
    if ((next - pi).cwiseAbs().maxCoeff() < 1e-15) return (next / next.sum()).transpose();
    pi = next;
    avg += (pi - avg) / (it + 1.0);
    if (it % 64 == 0) {
      if ((avg - prev_avg).cwiseAbs().maxCoeff() < 1e-13) break;
      prev_avg = avg;
    }
  }
  return (avg / avg.sum()).transpose();
}

}  // namespace

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& T) {
  if (!is_row_stochastic(T)) throw NumericError("stationary_distribution: matrix is not row-stochastic");
  const int n = static_cast<int>(T.rows());
  Eigen::MatrixXd A = T.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.isInvertible()) {
    Eigen::VectorXd pi = lu.solve(rhs);
    // A clean solve can still go negative on ill-conditioned inputs; tiny
    // negatives are clamped, anything larger means the chain is reducible.
    if (pi.minCoeff() > -1e-9) {
      pi = pi.cwiseMax(0.0);
      return pi / pi.sum();
    }
  }
  return cesaro_stationary(T);
}

}  // namespace rllink
