// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace cbir::detail {

struct OmpSupport {
  std::vector<Eigen::Index> support;
  Eigen::VectorXd coef;  // aligned with support
};

/// OMP given the Gram matrix and D^T x. At most T atoms; stops early when the
/// best correlation falls below 1e-13 * ||x|| or the next atom is linearly
/// dependent on the current support.
OmpSupport batch_omp(const Eigen::MatrixXd& gram, const Eigen::VectorXd& dtx, double x_norm,
                     std::size_t T);

}  // namespace cbir::detail
