// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace testsupport {

std::vector<double> random_vector(cbir::Rng& rng, std::size_t d, double lo, double hi) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

namespace {

std::string tag(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i);
  return buf;
}

}  // namespace

cbir::FeatureSet clusters(std::size_t classes, std::size_t per_class, std::size_t d,
                          double spread, std::uint64_t seed) {
  cbir::Rng rng(seed);
  cbir::FeatureSet fs(d);
  for (std::size_t c = 0; c < classes; ++c) {
    const auto centre = random_vector(rng, d, -10.0, 10.0);
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> v(d);
      for (std::size_t j = 0; j < d; ++j) v[j] = centre[j] + spread * rng.normal();
      char id[64];
      std::snprintf(id, sizeof id, "c%02zu_%03zu", c, i);
      fs.add(id, v, tag("c", c));
    }
  }
  return fs;
}

Eigen::MatrixXd random_dictionary(cbir::Rng& rng, std::size_t d, std::size_t K) {
  Eigen::MatrixXd D(d, K);
  for (Eigen::Index k = 0; k < D.cols(); ++k) {
    for (Eigen::Index i = 0; i < D.rows(); ++i) D(i, k) = rng.normal();
    D.col(k).normalize();
  }
  return D;
}

cbir::FeatureSet sparse_generated(std::size_t classes, std::size_t per_class, std::size_t d,
                                  std::uint64_t seed) {
  cbir::Rng rng(seed);
  const Eigen::MatrixXd gen = random_dictionary(rng, d, 3 * classes);
  cbir::FeatureSet fs(d);
  for (std::size_t c = 0; c < classes; ++c) {
    const auto base = static_cast<Eigen::Index>(3 * c);
    for (std::size_t i = 0; i < per_class; ++i) {
      Eigen::VectorXd x = rng.uniform(0.8, 1.2) * gen.col(base) +
                          0.25 * rng.normal() * gen.col(base + 1) +
                          0.25 * rng.normal() * gen.col(base + 2);
      for (Eigen::Index j = 0; j < x.size(); ++j) x(j) += 0.01 * rng.normal();
      char id[64];
      std::snprintf(id, sizeof id, "s%02zu_%03zu", c, i);
      fs.add(id, std::vector<double>(x.data(), x.data() + x.size()), tag("k", c));
    }
  }
  return fs;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() /
                 ("cbir_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace testsupport
