// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cbir/feature_set.hpp"
#include "cbir/rng.hpp"

namespace testsupport {

std::vector<double> random_vector(cbir::Rng& rng, std::size_t d, double lo = -1.0, double hi = 1.0);

/// `classes` well-separated Gaussian blobs of `per_class` points in d
/// dimensions; labels "c00", "c01", ...; ids "c00_000", ...
cbir::FeatureSet clusters(std::size_t classes, std::size_t per_class, std::size_t d,
                          double spread, std::uint64_t seed);

/// Every class draws its signals from its own three generator atoms: one
/// dominant direction plus two weaker ones, with a little isotropic noise.
cbir::FeatureSet sparse_generated(std::size_t classes, std::size_t per_class, std::size_t d,
                                  std::uint64_t seed);

/// Unit-norm random dictionary, d x K.
Eigen::MatrixXd random_dictionary(cbir::Rng& rng, std::size_t d, std::size_t K);

/// A fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

std::string slurp(const std::filesystem::path& path);

}  // namespace testsupport
