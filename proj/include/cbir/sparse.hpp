// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cbir/feature_set.hpp"

namespace cbir {

// ---------------------------------------------------------------------------
// Dictionary

enum class DictLearner : std::uint8_t { kmeans = 0, ksvd = 1 };

std::string_view to_string(DictLearner learner);
DictLearner parse_dict_learner(std::string_view text);

/// A d x K matrix of unit-norm atoms (columns).
class Dictionary {
 public:
  /// Throws SpecError unless K >= 2 and every column has unit norm to 1e-9.
  Dictionary(Eigen::MatrixXd atoms, DictLearner learner, std::uint64_t seed);

  const Eigen::MatrixXd& atoms() const noexcept { return atoms_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(atoms_.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(atoms_.cols()); }
  DictLearner learner() const noexcept { return learner_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  Eigen::MatrixXd atoms_;
  DictLearner learner_;
  std::uint64_t seed_;
};

/// Binary layout (little-endian): "CBDC" | u32 version=1 | u32 d | u32 K |
/// u8 learner | u64 seed | d*K float64 atoms, column-major.
inline constexpr char kDictionaryMagic[4] = {'C', 'B', 'D', 'C'};
inline constexpr std::uint32_t kDictionaryVersion = 1;

void save_dictionary(const Dictionary& dict, const std::filesystem::path& path);
Dictionary load_dictionary(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Coefficient learning

enum class ClAlgorithm { homotopy, lasso, elastic_net, ssf };

std::string_view to_string(ClAlgorithm algorithm);
/// Accepts homotopy, lasso, elastic_net / en, ssf.
ClAlgorithm parse_cl_algorithm(std::string_view text);

/// Settings for one coefficient-learning solve. With `relative` set, the
/// penalties are fractions of lambda_max(x) = max_j |d_j^T x|, so one value
/// serves signals of any scale.
struct ClSpec {
  ClAlgorithm algorithm = ClAlgorithm::homotopy;
  double lambda1 = 0.1;
  std::optional<double> lambda2;  ///< elastic net only; defaults to lambda1
  bool relative = true;
  std::size_t max_iter = 10000;
  double tol = 1e-7;

  static ClSpec absolute(ClAlgorithm algorithm, double lambda1, double lambda2 = 0.0) {
    ClSpec s;
    s.algorithm = algorithm;
    s.lambda1 = lambda1;
    s.lambda2 = lambda2;
    s.relative = false;
    return s;
  }
};

struct SparseCode {
  Eigen::VectorXd coefficients;
  bool converged = true;
  std::size_t iterations = 0;
};

/// Dictionary plus the quantities every solver reuses: the Gram matrix and
/// the Lipschitz bound of the least-squares gradient.
class SparseProblem {
 public:
  explicit SparseProblem(Eigen::MatrixXd dictionary);

  const Eigen::MatrixXd& dictionary() const noexcept { return dict_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  std::size_t atoms() const noexcept { return static_cast<std::size_t>(dict_.cols()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(dict_.rows()); }

  /// Largest eigenvalue of D^T D by power iteration, times 1.01.
  double lipschitz() const noexcept { return lipschitz_; }

 private:
  Eigen::MatrixXd dict_;
  Eigen::MatrixXd gram_;
  double lipschitz_;
};

/// max_j |d_j^T x|: the smallest lambda whose lasso solution is zero.
double lambda_max(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x);

/// 0.5 * ||x - D alpha||^2 + lambda1 * ||alpha||_1.
double sr_objective(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& alpha, double lambda1);

/// Largest violation of the lasso optimality conditions at `lambda`:
/// |g_j| <= lambda where alpha_j = 0 and g_j = lambda sign(alpha_j)
/// elsewhere, with g = D^T (x - D alpha).
double kkt_violation(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& alpha, double lambda);

/// Greedy orthogonal matching pursuit with at most T atoms. Stops early once
/// the residual vanishes.
SparseCode sparse_omp(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x, std::size_t T);

/// Cyclic coordinate descent on the lasso objective.
SparseCode solve_lasso(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x, const ClSpec& spec);

/// LARS-style homotopy from lambda_max down to the target penalty.
SparseCode solve_homotopy(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x,
                          const ClSpec& spec);

/// Coordinate descent on 0.5||x-Da||^2 + l1||a||_1 + (l2/2)||a||^2.
SparseCode solve_elastic_net(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x,
                             const ClSpec& spec);

/// Iterative shrinkage with the separable surrogate step 1/c.
SparseCode solve_ssf(const Eigen::MatrixXd& dict, const Eigen::VectorXd& x, const ClSpec& spec);

/// Dispatch on spec.algorithm, reusing the precomputed problem.
SparseCode solve(const SparseProblem& problem, const Eigen::VectorXd& x, const ClSpec& spec);

/// Absolute (lambda1, lambda2) for signal x under spec.
std::pair<double, double> resolve_lambdas(const SparseProblem& problem, const Eigen::VectorXd& x,
                                          const ClSpec& spec);

// ---------------------------------------------------------------------------
// Dictionary learning

/// k-means++ seeding, then Lloyd iterations (at most `iters`, or until no
/// centroid moves by 1e-9). Centroids are normalised into atoms.
Dictionary build_dict_kmeans(const FeatureSet& train, std::size_t K, std::uint64_t seed,
                             std::size_t iters = 100);

/// Same on a d x n signal matrix.
Dictionary learn_kmeans(const Eigen::MatrixXd& signals, std::size_t K, std::uint64_t seed,
                        std::size_t iters = 100);

/// K-SVD: alternates T-sparse OMP coding with exact rank-1 atom updates.
/// `objective_trace`, when given, receives sum ||x - D alpha||^2 after every
/// iteration; the sequence is nonincreasing.
Dictionary build_dict_ksvd(const FeatureSet& train, std::size_t K, std::size_t sparsity,
                           std::size_t iters, std::uint64_t seed,
                           std::vector<double>* objective_trace = nullptr);

Dictionary learn_ksvd(const Eigen::MatrixXd& signals, std::size_t K, std::size_t sparsity,
                      std::size_t iters, std::uint64_t seed,
                      std::vector<double>* objective_trace = nullptr);

/// max(2, K/10), capped at K.
std::size_t default_ksvd_sparsity(std::size_t K);
/// 50 for K-SVD, 100 for K-means.
std::size_t default_dict_iters(DictLearner learner);

/// Signals as columns of a d x n matrix.
Eigen::MatrixXd signal_matrix(const FeatureSet& fs);

// ---------------------------------------------------------------------------
// Encoding a whole set

struct EncodeReport {
  std::size_t vectors = 0;
  std::size_t converged = 0;
  std::vector<std::string> unconverged_ids;
};

struct EncodeResult {
  FeatureSet codes;
  EncodeReport report;
};

/// Solves every row of `fs` against the dictionary on up to `jobs` threads.
/// Ids, labels and order are preserved; the output dimension is K.
EncodeResult encode_set(const Dictionary& dict, const FeatureSet& fs, const ClSpec& spec,
                        std::size_t jobs = 1);

}  // namespace cbir
