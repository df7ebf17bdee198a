#pragma once

#include <Eigen/Dense>

namespace rllink {

// A finite chain bundled with its stationary law.
struct ChainSolution {
  Eigen::MatrixXd transition;
  Eigen::VectorXd stationary;
};

// True when every row of T is nonnegative and sums to 1 within tol.
bool is_row_stochastic(const Eigen::MatrixXd& T, double tol = 1e-10);

// Stationary distribution pi with pi^T T = pi^T, sum(pi) = 1.
//
// Solved as the linear system (T^T - I) pi = 0 with the last equation
// replaced by the normalization row; that system is nonsingular exactly when
// the chain has a single recurrent class. For reducible corner cases the
// solve is detected as singular and we fall back to Cesaro-averaged power
// iteration from the uniform distribution, which converges to a stationary
// distribution (the one reachable from uniform) even for periodic chains.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& T);

}  // namespace rllink
