// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cbir/sparse.hpp"

namespace cbir::detail {

// Solver cores on a prepared problem with absolute penalties.

SparseCode coordinate_descent(const SparseProblem& problem, const Eigen::VectorXd& x, double l1,
                              double l2, std::size_t max_iter, double tol);

SparseCode homotopy(const SparseProblem& problem, const Eigen::VectorXd& x, double l1,
                    std::size_t max_steps);

SparseCode iterative_shrinkage(const SparseProblem& problem, const Eigen::VectorXd& x, double l1,
                               std::size_t max_iter, double tol);

inline double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

void check_signal(const SparseProblem& problem, const Eigen::VectorXd& x);

}  // namespace cbir::detail
