// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "cbir/error.hpp"
#include "cbir/rng.hpp"
#include "cbir/simd.hpp"
#include "cbir/sparse.hpp"

namespace cbir {
namespace {

double sq_dist(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
  return simd::active().squared_l2(a.col(i).data(), b.col(j).data(), static_cast<std::size_t>(a.rows()));
}

// Nearest centre, lowest index on ties.
std::pair<Eigen::Index, double> nearest(const Eigen::MatrixXd& x, Eigen::Index i,
                                        const Eigen::MatrixXd& centres) {
  Eigen::Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < centres.cols(); ++k) {
    const double d = sq_dist(x, i, centres, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return {best, best_d};
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& x, std::size_t K, Rng& rng) {
  const Eigen::Index n = x.cols();
  Eigen::MatrixXd centres(x.rows(), static_cast<Eigen::Index>(K));
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  Eigen::Index pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
  centres.col(0) = x.col(pick);
  taken[static_cast<std::size_t>(pick)] = true;
  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = sq_dist(x, i, centres, 0);
  for (std::size_t k = 1; k < K; ++k) {
    const double total = d2.sum();
    pick = -1;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (d2(i) > 0.0 && acc > r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {  // rounding at the top end
        for (Eigen::Index i = n - 1; i >= 0 && pick < 0; --i) {
          if (d2(i) > 0.0) pick = i;
        }
      }
    } else {
      // Every point coincides with a centre; fall back to the first unused one.
      for (Eigen::Index i = 0; i < n && pick < 0; ++i) {
        if (!taken[static_cast<std::size_t>(i)]) pick = i;
      }
    }
    taken[static_cast<std::size_t>(pick)] = true;
    const auto kk = static_cast<Eigen::Index>(k);
    centres.col(kk) = x.col(pick);
    for (Eigen::Index i = 0; i < n; ++i) d2(i) = std::min(d2(i), sq_dist(x, i, centres, kk));
  }
  return centres;
}

}  // namespace

Dictionary learn_kmeans(const Eigen::MatrixXd& signals, std::size_t K, std::uint64_t seed,
                        std::size_t iters) {
  const Eigen::Index n = signals.cols();
  if (K < 2) throw SpecError("k-means dictionary needs K >= 2");
  if (K > static_cast<std::size_t>(n)) {
    throw SpecError("k-means dictionary of size " + std::to_string(K) + " from only " +
                    std::to_string(n) + " training vectors");
  }
  if (iters < 1) throw SpecError("k-means needs at least one iteration");
  Rng rng(seed);
  Eigen::MatrixXd centres = seed_plus_plus(signals, K, rng);
  const auto Ki = static_cast<Eigen::Index>(K);
  std::vector<Eigen::Index> assign(static_cast<std::size_t>(n), 0);
  std::vector<double> dist(static_cast<std::size_t>(n), 0.0);

  auto assign_all = [&] {
    for (Eigen::Index i = 0; i < n; ++i) {
      auto [k, d] = nearest(signals, i, centres);
      assign[static_cast<std::size_t>(i)] = k;
      dist[static_cast<std::size_t>(i)] = d;
    }
  };

  for (std::size_t it = 0; it < iters; ++it) {
    assign_all();
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(signals.rows(), Ki);
    std::vector<std::size_t> counts(K, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = assign[static_cast<std::size_t>(i)];
      sums.col(k) += signals.col(i);
      ++counts[static_cast<std::size_t>(k)];
    }
    std::vector<bool> reseeded(static_cast<std::size_t>(n), false);
    double moved = 0.0;
    for (Eigen::Index k = 0; k < Ki; ++k) {
      Eigen::VectorXd next;
      if (counts[static_cast<std::size_t>(k)] > 0) {
        next = sums.col(k) / static_cast<double>(counts[static_cast<std::size_t>(k)]);
      } else {
        // Empty cluster: move to the point farthest from its own centre.
        Eigen::Index far = -1;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!reseeded[static_cast<std::size_t>(i)] && dist[static_cast<std::size_t>(i)] > far_d) {
            far_d = dist[static_cast<std::size_t>(i)];
            far = i;
          }
        }
        reseeded[static_cast<std::size_t>(far)] = true;
        next = signals.col(far);
      }
      moved = std::max(moved, (next - centres.col(k)).norm());
      centres.col(k) = next;
    }
    if (moved < 1e-9) break;
  }

  // Normalise; a centre at the origin borrows the farthest training vector.
  assign_all();
  for (Eigen::Index k = 0; k < Ki; ++k) {
    double norm = centres.col(k).norm();
    if (norm <= 1e-12) {
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (signals.col(i).norm() > 1e-12 && dist[static_cast<std::size_t>(i)] > far_d) {
          far_d = dist[static_cast<std::size_t>(i)];
          far = i;
        }
      }
      if (far < 0) throw DataError("k-means dictionary: every training vector is zero");
      centres.col(k) = signals.col(far);
      norm = centres.col(k).norm();
    }
    centres.col(k) /= norm;
  }
  return Dictionary(std::move(centres), DictLearner::kmeans, seed);
}

Dictionary build_dict_kmeans(const FeatureSet& train, std::size_t K, std::uint64_t seed,
                             std::size_t iters) {
  return learn_kmeans(signal_matrix(train), K, seed, iters);
}

}  // namespace cbir
