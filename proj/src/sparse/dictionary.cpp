// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "cbir/error.hpp"
#include "cbir/sparse.hpp"

namespace cbir {

std::string_view to_string(DictLearner learner) {
  return learner == DictLearner::kmeans ? "kmeans" : "ksvd";
}

DictLearner parse_dict_learner(std::string_view text) {
  if (text == "kmeans") return DictLearner::kmeans;
  if (text == "ksvd") return DictLearner::ksvd;
  throw SpecError("unknown dictionary learner '" + std::string(text) + "'");
}

std::string_view to_string(ClAlgorithm algorithm) {
  switch (algorithm) {
    case ClAlgorithm::homotopy: return "homotopy";
    case ClAlgorithm::lasso: return "lasso";
    case ClAlgorithm::elastic_net: return "en";
    case ClAlgorithm::ssf: return "ssf";
  }
  return "?";
}

ClAlgorithm parse_cl_algorithm(std::string_view text) {
  if (text == "homotopy") return ClAlgorithm::homotopy;
  if (text == "lasso") return ClAlgorithm::lasso;
  if (text == "en" || text == "elastic_net" || text == "elastic-net") return ClAlgorithm::elastic_net;
  if (text == "ssf") return ClAlgorithm::ssf;
  throw SpecError("unknown coefficient learner '" + std::string(text) + "'");
}

Dictionary::Dictionary(Eigen::MatrixXd atoms, DictLearner learner, std::uint64_t seed)
    : atoms_(std::move(atoms)), learner_(learner), seed_(seed) {
  if (atoms_.cols() < 2) throw SpecError("a dictionary needs at least two atoms");
  if (atoms_.rows() < 1) throw SpecError("dictionary atoms must have positive dimension");
  for (Eigen::Index k = 0; k < atoms_.cols(); ++k) {
    const double norm = atoms_.col(k).norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-9) {
      throw SpecError("atom " + std::to_string(k) + " has norm " + std::to_string(norm));
    }
  }
}

SparseProblem::SparseProblem(Eigen::MatrixXd dictionary)
    : dict_(std::move(dictionary)), gram_(dict_.transpose() * dict_) {
  const Eigen::Index k = gram_.rows();
  if (k == 0) {
    lipschitz_ = 1.0;
    return;
  }
  // Power iteration from a fixed, mildly uneven start vector.
  Eigen::VectorXd v(k);
  for (Eigen::Index i = 0; i < k; ++i) v(i) = 1.0 + 1e-3 * static_cast<double>(i % 7);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Eigen::VectorXd w = gram_ * v;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) break;
    v = w / norm;
    if (std::abs(next - estimate) <= 1e-12 * std::max(1.0, std::abs(next))) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  lipschitz_ = std::max(estimate, 1e-12) * 1.01;
}

double lambda_max(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x) {
  if (x.size() != dict.rows()) throw DimensionError("signal and dictionary dimensions differ");
  return (dict.transpose() * x).cwiseAbs().maxCoeff();
}

double sr_objective(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& alpha, double lambda1) {
  if (x.size() != dict.rows() || alpha.size() != dict.cols()) {
    throw DimensionError("objective: shapes of x (" + std::to_string(x.size()) + "), D (" +
                         std::to_string(dict.rows()) + "x" + std::to_string(dict.cols()) +
                         ") and alpha (" + std::to_string(alpha.size()) + ") disagree");
  }
  return 0.5 * (x - dict * alpha).squaredNorm() + lambda1 * alpha.lpNorm<1>();
}

double kkt_violation(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& alpha, double lambda) {
  const Eigen::VectorXd g = dict.transpose() * (x - dict * alpha);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    const double v = alpha(j) == 0.0 ? std::max(0.0, std::abs(g(j)) - lambda)
                                     : std::abs(g(j) - lambda * (alpha(j) > 0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

std::pair<double, double> resolve_lambdas(const SparseProblem& problem, const Eigen::VectorXd& x,
                                          const ClSpec& spec) {
  if (!(spec.lambda1 >= 0.0)) throw SpecError("lambda1 must be nonnegative");
  if (spec.lambda2 && !(*spec.lambda2 >= 0.0)) throw SpecError("lambda2 must be nonnegative");
  const double scale = spec.relative ? lambda_max(problem.dictionary(), x) : 1.0;
  const double l1 = spec.lambda1 * scale;
  const double l2 = spec.lambda2 ? *spec.lambda2 * scale : l1;
  return {l1, l2};
}

Eigen::MatrixXd signal_matrix(const FeatureSet& fs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(fs.dim()), static_cast<Eigen::Index>(fs.size()));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    auto r = fs.row(i);
    m.col(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
  }
  return m;
}

std::size_t default_ksvd_sparsity(std::size_t K) { return std::min(K, std::max<std::size_t>(2, K / 10)); }

std::size_t default_dict_iters(DictLearner learner) {
  return learner == DictLearner::kmeans ? 100 : 50;
}

}  // namespace cbir
