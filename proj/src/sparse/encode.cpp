// SPDX-License-Identifier: Apache-2.0

#include "cbir/error.hpp"
#include "cbir/parallel.hpp"
#include "solvers_internal.hpp"

namespace cbir {

SparseCode solve(const SparseProblem& problem, const Eigen::VectorXd& x, const ClSpec& spec) {
  detail::check_signal(problem, x);
  if (!(spec.tol > 0.0)) throw SpecError("solver tolerance must be positive");
  if (spec.max_iter < 1) throw SpecError("solver needs at least one iteration");
  const auto [l1, l2] = resolve_lambdas(problem, x, spec);
  switch (spec.algorithm) {
    case ClAlgorithm::homotopy:
      return detail::homotopy(problem, x, l1, spec.max_iter);
    case ClAlgorithm::lasso:
      return detail::coordinate_descent(problem, x, l1, 0.0, spec.max_iter, spec.tol);
    case ClAlgorithm::elastic_net:
      return detail::coordinate_descent(problem, x, l1, l2, spec.max_iter, spec.tol);
    case ClAlgorithm::ssf:
      return detail::iterative_shrinkage(problem, x, l1, spec.max_iter, spec.tol);
  }
  throw SpecError("invalid coefficient learner");
}

EncodeResult encode_set(const Dictionary& dict, const FeatureSet& fs, const ClSpec& spec,
                        std::size_t jobs) {
  const std::size_t K = dict.size();
  if (fs.dim() != 0 && fs.dim() != dict.dim()) {
    throw DimensionError("features have " + std::to_string(fs.dim()) +
                         " dimensions, dictionary atoms " + std::to_string(dict.dim()));
  }
  const SparseProblem problem(dict.atoms());
  std::vector<double> values(fs.size() * K);
  std::vector<char> converged(fs.size(), 0);
  parallel_for(fs.size(), jobs, [&](std::size_t i) {
    auto r = fs.row(i);
    const Eigen::Map<const Eigen::VectorXd> x(r.data(), static_cast<Eigen::Index>(r.size()));
    try {
      const SparseCode code = solve(problem, x, spec);
      std::copy(code.coefficients.data(), code.coefficients.data() + K, values.begin() + static_cast<std::ptrdiff_t>(i * K));
      converged[i] = code.converged ? 1 : 0;
    } catch (const Error& e) {
      throw DataError("encoding '" + fs.id(i) + "': " + e.what());
    }
  });
  EncodeResult out{fs.with_values(K, std::move(values)), {}};
  out.report.vectors = fs.size();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (converged[i]) {
      ++out.report.converged;
    } else {
      out.report.unconverged_ids.push_back(fs.id(i));
    }
  }
  return out;
}

}  // namespace cbir
