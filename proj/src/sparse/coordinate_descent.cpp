// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "cbir/error.hpp"
#include "solvers_internal.hpp"

namespace cbir {
namespace detail {

void check_signal(const SparseProblem& problem, const Eigen::VectorXd& x) {
  if (static_cast<std::size_t>(x.size()) != problem.dim()) {
    throw DimensionError("signal has " + std::to_string(x.size()) + " values, dictionary expects " +
                         std::to_string(problem.dim()));
  }
  if (!x.allFinite()) throw DataError("signal has non-finite values");
}

// Covariance-update coordinate descent: `corr` tracks D^T (x - D alpha) so a
// sweep costs O(K) plus O(K) per coordinate that actually moves.
SparseCode coordinate_descent(const SparseProblem& problem, const Eigen::VectorXd& x, double l1,
                              double l2, std::size_t max_iter, double tol) {
  check_signal(problem, x);
  const Eigen::MatrixXd& gram = problem.gram();
  const Eigen::Index K = gram.rows();
  Eigen::VectorXd corr = problem.dictionary().transpose() * x;
  SparseCode code;
  code.coefficients = Eigen::VectorXd::Zero(K);
  Eigen::VectorXd& alpha = code.coefficients;
  code.converged = false;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    double max_step = 0.0;
    for (Eigen::Index j = 0; j < K; ++j) {
      const double curvature = gram(j, j) + l2;
      if (curvature <= 0.0) continue;
      const double rho = corr(j) + gram(j, j) * alpha(j);
      const double next = soft_threshold(rho, l1) / curvature;
      const double step = next - alpha(j);
      if (step != 0.0) {
        corr.noalias() -= step * gram.col(j);
        alpha(j) = next;
        max_step = std::max(max_step, std::abs(step));
      }
    }
    code.iterations = it;
    if (max_step < tol) {
      code.converged = true;
      break;
    }
  }
  return code;
}

}  // namespace detail

SparseCode solve_lasso(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x, const ClSpec& spec) {
  SparseProblem problem(dict);
  ClSpec s = spec;
  s.algorithm = ClAlgorithm::lasso;
  return solve(problem, x, s);
}

SparseCode solve_elastic_net(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x,
                             const ClSpec& spec) {
  SparseProblem problem(dict);
  ClSpec s = spec;
  s.algorithm = ClAlgorithm::elastic_net;
  return solve(problem, x, s);
}

}  // namespace cbir
