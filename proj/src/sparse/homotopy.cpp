// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "cbir/error.hpp"
#include "solvers_internal.hpp"

namespace cbir {
namespace detail {

// Follows the piecewise-linear lasso path. Between breakpoints the active
// coefficients move along G_AA^{-1} s while every active correlation shrinks
// in lockstep with lambda. A breakpoint is either an inactive atom whose
// correlation reaches lambda (join) or an active coefficient reaching zero
// (drop). Equal step lengths resolve to the lowest atom index.
SparseCode homotopy(const SparseProblem& problem, const Eigen::VectorXd& x, double l1,
                    std::size_t max_steps) {
  check_signal(problem, x);
  const Eigen::MatrixXd& gram = problem.gram();
  const Eigen::Index K = gram.rows();
  const Eigen::VectorXd c = problem.dictionary().transpose() * x;

  SparseCode code;
  code.coefficients = Eigen::VectorXd::Zero(K);
  Eigen::VectorXd& alpha = code.coefficients;

  Eigen::Index first = 0;
  double lambda = c.cwiseAbs().maxCoeff(&first);
  if (lambda <= l1) return code;

  std::vector<Eigen::Index> active{first};
  std::vector<double> sign{c(first) > 0 ? 1.0 : -1.0};
  std::vector<bool> in_active(static_cast<std::size_t>(K), false);
  in_active[static_cast<std::size_t>(first)] = true;
  Eigen::Index just_dropped = -1;
  const double tiny = 1e-14 * std::max(1.0, lambda);

  code.converged = false;
  for (std::size_t step = 1; step <= max_steps; ++step) {
    code.iterations = step;
    const auto m = static_cast<Eigen::Index>(active.size());
    if (m == 0) break;
    Eigen::MatrixXd g_aa(m, m);
    Eigen::VectorXd s(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      s(a) = sign[static_cast<std::size_t>(a)];
      for (Eigen::Index b = 0; b < m; ++b) g_aa(a, b) = gram(active[a], active[b]);
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g_aa);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd dir = ldlt.solve(s);

    // Rate at which each correlation falls per unit decrease of lambda.
    Eigen::VectorXd rate = Eigen::VectorXd::Zero(K);
    for (Eigen::Index a = 0; a < m; ++a) rate.noalias() += dir(a) * gram.col(active[a]);
    const Eigen::VectorXd corr = c - gram * alpha;

    double gamma = lambda - l1;
    enum class Event { target, join, drop } event = Event::target;
    Eigen::Index who = -1;
    double who_sign = 0.0;

    for (Eigen::Index j = 0; j < K; ++j) {
      if (in_active[static_cast<std::size_t>(j)] || j == just_dropped) continue;
      const double up = 1.0 - rate(j);
      if (up > 1e-12) {
        const double g = (lambda - corr(j)) / up;
        if (g > tiny && g < gamma) {
          gamma = g;
          event = Event::join;
          who = j;
          who_sign = 1.0;
        }
      }
      const double down = 1.0 + rate(j);
      if (down > 1e-12) {
        const double g = (lambda + corr(j)) / down;
        if (g > tiny && g < gamma) {
          gamma = g;
          event = Event::join;
          who = j;
          who_sign = -1.0;
        }
      }
    }
    for (Eigen::Index a = 0; a < m; ++a) {
      if (dir(a) == 0.0) continue;
      const double g = -alpha(active[a]) / dir(a);
      if (g > tiny && (g < gamma || (g == gamma && event != Event::target && active[a] < who))) {
        gamma = g;
        event = Event::drop;
        who = active[a];
      }
    }

    for (Eigen::Index a = 0; a < m; ++a) alpha(active[a]) += gamma * dir(a);
    lambda -= gamma;
    just_dropped = -1;

    if (event == Event::target) {
      code.converged = true;
      break;
    }
    if (event == Event::join) {
      active.push_back(who);
      sign.push_back(who_sign);
      in_active[static_cast<std::size_t>(who)] = true;
    } else {
      const auto pos = std::find(active.begin(), active.end(), who) - active.begin();
      active.erase(active.begin() + pos);
      sign.erase(sign.begin() + pos);
      in_active[static_cast<std::size_t>(who)] = false;
      alpha(who) = 0.0;
      just_dropped = who;
    }
  }
  return code;
}

}  // namespace detail

SparseCode solve_homotopy(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x,
                          const ClSpec& spec) {
  SparseProblem problem(dict);
  ClSpec s = spec;
  s.algorithm = ClAlgorithm::homotopy;
  return solve(problem, x, s);
}

}  // namespace cbir
