// SPDX-License-Identifier: Apache-2.0

#include "cbir/error.hpp"
#include "solvers_internal.hpp"

namespace cbir {
namespace detail {

SparseCode iterative_shrinkage(const SparseProblem& problem, const Eigen::VectorXd& x, double l1,
                               std::size_t max_iter, double tol) {
  check_signal(problem, x);
  const Eigen::MatrixXd& gram = problem.gram();
  const Eigen::VectorXd c = problem.dictionary().transpose() * x;
  const double step = 1.0 / problem.lipschitz();
  const double threshold = l1 * step;

  SparseCode code;
  code.coefficients = Eigen::VectorXd::Zero(gram.rows());
  Eigen::VectorXd& alpha = code.coefficients;
  Eigen::VectorXd next(gram.rows());
  code.converged = false;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    // D^T (x - D alpha) = c - G alpha
    next = alpha + step * (c - gram * alpha);
    for (Eigen::Index j = 0; j < next.size(); ++j) next(j) = soft_threshold(next(j), threshold);
    const double moved = (next - alpha).norm();
    alpha.swap(next);
    code.iterations = it;
    if (moved < tol) {
      code.converged = true;
      break;
    }
  }
  return code;
}

}  // namespace detail

SparseCode solve_ssf(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x, const ClSpec& spec) {
  SparseProblem problem(dict);
  ClSpec s = spec;
  s.algorithm = ClAlgorithm::ssf;
  return solve(problem, x, s);
}

}  // namespace cbir
