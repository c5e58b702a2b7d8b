// SPDX-License-Identifier: Apache-2.0

#include <Eigen/SVD>

#include "cbir/error.hpp"
#include "cbir/rng.hpp"
#include "cbir/sparse.hpp"
#include "omp_internal.hpp"

namespace cbir {

Dictionary learn_ksvd(const Eigen::MatrixXd& signals, std::size_t K, std::size_t sparsity,
                      std::size_t iters, std::uint64_t seed, std::vector<double>* objective_trace) {
  const Eigen::Index n = signals.cols();
  const Eigen::Index d = signals.rows();
  if (K < 2) throw SpecError("K-SVD dictionary needs K >= 2");
  if (K > static_cast<std::size_t>(n)) {
    throw SpecError("K-SVD dictionary of size " + std::to_string(K) + " from only " +
                    std::to_string(n) + " training vectors");
  }
  if (sparsity < 1 || sparsity > K) throw SpecError("K-SVD sparsity must be in [1, K]");

  // Initial atoms: K distinct nonzero training vectors drawn by seed.
  std::vector<Eigen::Index> pool;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (signals.col(i).norm() > 0.0) pool.push_back(i);
  }
  if (pool.size() < K) throw DataError("K-SVD needs at least K nonzero training vectors");
  Rng rng(seed);
  const auto Ki = static_cast<Eigen::Index>(K);
  Eigen::MatrixXd dict(d, Ki);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t j = k + rng.below(pool.size() - k);
    std::swap(pool[k], pool[j]);
    dict.col(static_cast<Eigen::Index>(k)) = signals.col(pool[k]).normalized();
  }
  if (objective_trace) objective_trace->clear();
  if (iters == 0) return Dictionary(std::move(dict), DictLearner::ksvd, seed);

  Eigen::MatrixXd codes = Eigen::MatrixXd::Zero(Ki, n);
  Eigen::MatrixXd residual = signals;  // signals - dict * codes, kept current
  Eigen::VectorXd norms(n);
  for (Eigen::Index i = 0; i < n; ++i) norms(i) = signals.col(i).norm();

  for (std::size_t it = 0; it < iters; ++it) {
    // Coding stage. A signal keeps its previous code when that one is at
    // least as good under the current atoms, so the objective cannot rise.
    const Eigen::MatrixXd gram = dict.transpose() * dict;
    const Eigen::MatrixXd dtx = dict.transpose() * signals;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto sel = detail::batch_omp(gram, dtx.col(i), norms(i), sparsity);
      Eigen::VectorXd fresh = signals.col(i);
      for (std::size_t s = 0; s < sel.support.size(); ++s) {
        fresh.noalias() -= sel.coef(static_cast<Eigen::Index>(s)) * dict.col(sel.support[s]);
      }
      if (it > 0 && residual.col(i).squaredNorm() <= fresh.squaredNorm()) continue;
      codes.col(i).setZero();
      for (std::size_t s = 0; s < sel.support.size(); ++s) {
        codes(sel.support[s], i) = sel.coef(static_cast<Eigen::Index>(s));
      }
      residual.col(i) = fresh;
    }

    // Atom updates, one at a time, each against the current residual.
    std::vector<bool> donated(static_cast<std::size_t>(n), false);
    std::vector<Eigen::Index> users;
    for (Eigen::Index k = 0; k < Ki; ++k) {
      users.clear();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (codes(k, i) != 0.0) users.push_back(i);
      }
      if (users.empty()) {
        // Unused atom: replace it with the worst-represented signal.
        Eigen::Index worst = -1;
        double worst_err = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (donated[static_cast<std::size_t>(i)] || norms(i) == 0.0) continue;
          const double e = residual.col(i).squaredNorm();
          if (e > worst_err) {
            worst_err = e;
            worst = i;
          }
        }
        if (worst >= 0) {
          donated[static_cast<std::size_t>(worst)] = true;
          dict.col(k) = signals.col(worst) / norms(worst);
        }
        continue;
      }
      const auto m = static_cast<Eigen::Index>(users.size());
      Eigen::MatrixXd err(d, m);
      for (Eigen::Index u = 0; u < m; ++u) {
        err.col(u) = residual.col(users[u]) + dict.col(k) * codes(k, users[u]);
      }
      Eigen::BDCSVD<Eigen::MatrixXd> svd(err, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const double sigma = svd.singularValues()(0);
      Eigen::VectorXd atom = svd.matrixU().col(0);
      Eigen::VectorXd row = sigma * svd.matrixV().col(0);
      if (sigma == 0.0) continue;  // all users cancel exactly; leave the atom alone
      // Sign is free; pin it so the largest atom entry is positive.
      Eigen::Index pivot = 0;
      atom.cwiseAbs().maxCoeff(&pivot);
      if (atom(pivot) < 0) {
        atom = -atom;
        row = -row;
      }
      dict.col(k) = atom.normalized();
      for (Eigen::Index u = 0; u < m; ++u) {
        codes(k, users[u]) = row(u);
        residual.col(users[u]) = err.col(u) - dict.col(k) * row(u);
      }
    }
    residual.noalias() = signals - dict * codes;  // drop accumulated rounding
    if (objective_trace) objective_trace->push_back(residual.squaredNorm());
  }
  return Dictionary(std::move(dict), DictLearner::ksvd, seed);
}

Dictionary build_dict_ksvd(const FeatureSet& train, std::size_t K, std::size_t sparsity,
                           std::size_t iters, std::uint64_t seed,
                           std::vector<double>* objective_trace) {
  return learn_ksvd(signal_matrix(train), K, sparsity, iters, seed, objective_trace);
}

}  // namespace cbir
