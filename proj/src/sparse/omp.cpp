// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "cbir/error.hpp"
#include "cbir/sparse.hpp"
#include "omp_internal.hpp"

namespace cbir {
namespace detail {

// Gram-based OMP with an incrementally grown Cholesky factor of G_SS. Only
// D^T x and the Gram matrix are touched, so each step is O(K |S|).
OmpSupport batch_omp(const Eigen::MatrixXd& gram, const Eigen::VectorXd& dtx, double x_norm,
                     std::size_t T) {
  const Eigen::Index K = gram.rows();
  T = std::min<std::size_t>(T, static_cast<std::size_t>(K));
  OmpSupport out;
  if (x_norm == 0.0 || T == 0) return out;

  const auto Ti = static_cast<Eigen::Index>(T);
  Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(Ti, Ti);
  std::vector<bool> chosen(static_cast<std::size_t>(K), false);
  Eigen::VectorXd corr = dtx;
  Eigen::VectorXd rhs;

  for (Eigen::Index t = 0; t < Ti; ++t) {
    Eigen::Index best = -1;
    double best_abs = 0.0;
    for (Eigen::Index j = 0; j < K; ++j) {
      if (chosen[static_cast<std::size_t>(j)]) continue;
      const double c = std::abs(corr(j));
      if (c > best_abs) {
        best_abs = c;
        best = j;
      }
    }
    if (best < 0 || best_abs <= 1e-13 * x_norm) break;

    if (t == 0) {
      chol(0, 0) = std::sqrt(gram(best, best));
    } else {
      Eigen::VectorXd g(t);
      for (Eigen::Index s = 0; s < t; ++s) g(s) = gram(out.support[static_cast<std::size_t>(s)], best);
      const Eigen::VectorXd w =
          chol.topLeftCorner(t, t).triangularView<Eigen::Lower>().solve(g);
      const double diag = gram(best, best) - w.squaredNorm();
      // The candidate lies in the span of the current support.
      if (diag <= 1e-12 * gram(best, best)) break;
      chol.block(t, 0, 1, t) = w.transpose();
      chol(t, t) = std::sqrt(diag);
    }
    chosen[static_cast<std::size_t>(best)] = true;
    out.support.push_back(best);

    const Eigen::Index m = t + 1;
    rhs.resize(m);
    for (Eigen::Index s = 0; s < m; ++s) rhs(s) = dtx(out.support[static_cast<std::size_t>(s)]);
    const auto lower = chol.topLeftCorner(m, m).triangularView<Eigen::Lower>();
    out.coef = lower.transpose().solve(lower.solve(rhs));

    corr = dtx;
    for (Eigen::Index s = 0; s < m; ++s) corr.noalias() -= out.coef(s) * gram.col(out.support[static_cast<std::size_t>(s)]);
  }
  return out;
}

}  // namespace detail

SparseCode sparse_omp(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x, std::size_t T) {
  if (x.size() != dict.rows()) throw DimensionError("signal and dictionary dimensions differ");
  const Eigen::MatrixXd gram = dict.transpose() * dict;
  const auto sel = detail::batch_omp(gram, dict.transpose() * x, x.norm(), T);
  SparseCode code;
  code.coefficients = Eigen::VectorXd::Zero(dict.cols());
  for (std::size_t s = 0; s < sel.support.size(); ++s) {
    code.coefficients(sel.support[s]) = sel.coef(static_cast<Eigen::Index>(s));
  }
  code.iterations = sel.support.size();
  return code;
}

}  // namespace cbir
