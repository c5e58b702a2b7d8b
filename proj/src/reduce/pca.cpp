// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include <Eigen/SVD>

#include "cbir/error.hpp"
#include "cbir/reduce.hpp"

namespace cbir {

PcaModel pca_fit(const FeatureSet& train, std::size_t k) {
  const std::size_t n = train.size();
  const std::size_t d = train.dim();
  if (n < 2 || k < 1 || k > std::min(n - 1, d)) {
    throw SpecError("PCA with k=" + std::to_string(k) + " needs 1 <= k <= min(n-1, d) = " +
                    std::to_string(n < 1 ? 0 : std::min(n - 1, d)));
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> data(
      train.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centred = data.rowwise() - mean;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  const auto& singular = svd.singularValues();
  const auto& v = svd.matrixV();

  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + d);
  model.components.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  model.variances.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    Eigen::VectorXd axis = v.col(ci);
    Eigen::Index pivot = 0;
    axis.cwiseAbs().maxCoeff(&pivot);
    if (axis(pivot) < 0) axis = -axis;
    model.components.row(ci) = axis.transpose();
    model.variances[c] = singular(ci) * singular(ci) / static_cast<double>(n);
  }
  return model;
}

std::vector<double> pca_project(const PcaModel& model, std::span<const double> v) {
  if (v.size() != model.mean.size()) {
    throw DimensionError("PCA fitted on " + std::to_string(model.mean.size()) +
                         " dimensions, got " + std::to_string(v.size()));
  }
  Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::Map<const Eigen::VectorXd> mean(model.mean.data(), static_cast<Eigen::Index>(v.size()));
  const Eigen::VectorXd projected = model.components * (x - mean);
  return {projected.data(), projected.data() + projected.size()};
}

}  // namespace cbir
