// SPDX-License-Identifier: Apache-2.0

#include "cbir/error.hpp"
#include "cbir/parallel.hpp"
#include "cbir/retrieval.hpp"

namespace cbir {
namespace {

std::string stage_name(std::size_t index, const StageSpec& spec) {
  return "stage " + std::to_string(index + 1) + " (" + format_stage(spec) + ")";
}

std::vector<double> apply_stage(const FittedStage& st, std::span<const double> v) {
  switch (st.spec.kind) {
    case StageKind::dct:
      return dct_keep(dct_forward(v), st.spec.dct);
    case StageKind::zscore:
      return zscore_apply(*st.zscore, v);
    case StageKind::pca:
      return pca_project(*st.pca, v);
    case StageKind::dwt:
      return haar_reduce(v, st.spec.dwt_levels);
    case StageKind::pdf:
      return pdf_reduce(v, st.spec.pdf);
    case StageKind::sparse: {
      const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
      const SparseCode code = solve(*st.problem, x, st.spec.sparse.cl);
      return {code.coefficients.data(), code.coefficients.data() + code.coefficients.size()};
    }
  }
  throw SpecError("invalid stage kind");
}

FeatureSet apply_stage(const FittedStage& st, const FeatureSet& fs, std::size_t jobs) {
  std::vector<double> values(fs.size() * st.out_dim);
  parallel_for(fs.size(), jobs, [&](std::size_t i) {
    const auto out = apply_stage(st, fs.row(i));
    std::copy(out.begin(), out.end(), values.begin() + static_cast<std::ptrdiff_t>(i * st.out_dim));
  });
  return fs.with_values(st.out_dim, std::move(values));
}

std::size_t halved(std::size_t n, std::size_t levels) {
  for (std::size_t l = 0; l < levels; ++l) n = (n + 1) / 2;
  return n;
}

FittedStage fit_stage(const StageSpec& spec, const FeatureSet& train) {
  FittedStage st;
  st.spec = spec;
  st.in_dim = train.dim();
  const auto fingerprint = id_fingerprint(train);
  switch (spec.kind) {
    case StageKind::dct:
      if (spec.dct.keep && *spec.dct.keep > st.in_dim) {
        throw PipelineError("keeps " + std::to_string(*spec.dct.keep) + " coefficients of a " +
                            std::to_string(st.in_dim) + "-d input");
      }
      st.out_dim = spec.dct.keep.value_or(st.in_dim);
      break;
    case StageKind::zscore:
      st.zscore = zscore_fit(train);
      st.out_dim = st.in_dim;
      st.fingerprint = fingerprint;
      break;
    case StageKind::pca: {
      const std::size_t limit = std::min(train.size() == 0 ? 0 : train.size() - 1, st.in_dim);
      if (spec.pca_components > limit) {
        throw PipelineError(std::to_string(spec.pca_components) + " components from " +
                            std::to_string(train.size()) + " rows of " +
                            std::to_string(st.in_dim) + "-d input (at most " +
                            std::to_string(limit) + ")");
      }
      st.pca = pca_fit(train, spec.pca_components);
      st.out_dim = spec.pca_components;
      st.fingerprint = fingerprint;
      break;
    }
    case StageKind::dwt:
      st.out_dim = halved(st.in_dim, spec.dwt_levels);
      break;
    case StageKind::pdf:
      st.out_dim = spec.pdf.bins;
      break;
    case StageKind::sparse: {
      const auto& sp = spec.sparse;
      if (sp.size > train.size()) {
        throw PipelineError("dictionary of " + std::to_string(sp.size) + " atoms from " +
                            std::to_string(train.size()) + " training vectors");
      }
      const std::size_t iters = sp.iters ? sp.iters : default_dict_iters(sp.learner);
      if (sp.learner == DictLearner::kmeans) {
        st.dictionary = build_dict_kmeans(train, sp.size, sp.seed, iters);
      } else {
        const std::size_t T = sp.sparsity ? sp.sparsity : default_ksvd_sparsity(sp.size);
        st.dictionary = build_dict_ksvd(train, sp.size, T, iters, sp.seed);
      }
      st.problem = std::make_shared<const SparseProblem>(st.dictionary->atoms());
      st.out_dim = sp.size;
      st.fingerprint = fingerprint;
      break;
    }
  }
  return st;
}

}  // namespace

TransformPipeline::TransformPipeline(std::size_t input_dim, std::vector<FittedStage> stages)
    : input_dim_(input_dim), stages_(std::move(stages)) {
  std::size_t dim = input_dim_;
  for (std::size_t i = 0; i < stages_.size(); ++i) {
    if (stages_[i].in_dim != dim) {
      throw PipelineError(stage_name(i, stages_[i].spec) + " expects " +
                          std::to_string(stages_[i].in_dim) + "-d input but receives " +
                          std::to_string(dim));
    }
    dim = stages_[i].out_dim;
  }
}

std::size_t TransformPipeline::output_dim() const noexcept {
  return stages_.empty() ? input_dim_ : stages_.back().out_dim;
}

TransformPipeline fit_pipeline(std::span<const StageSpec> stages, const FeatureSet& train,
                               std::size_t jobs) {
  if (train.empty()) throw PipelineError("cannot fit a pipeline on an empty training set");
  std::vector<FittedStage> fitted;
  FeatureSet current = train;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    try {
      fitted.push_back(fit_stage(stages[i], current));
      if (i + 1 < stages.size()) current = apply_stage(fitted.back(), current, jobs);
    } catch (const Error& e) {
      throw PipelineError(stage_name(i, stages[i]) + ": " + e.what());
    }
  }
  return TransformPipeline(train.dim(), std::move(fitted));
}

std::vector<double> apply_pipeline(const TransformPipeline& p, std::span<const double> v) {
  if (v.size() != p.input_dim()) {
    throw DimensionError("pipeline expects " + std::to_string(p.input_dim()) +
                         "-d input, got " + std::to_string(v.size()));
  }
  std::vector<double> cur(v.begin(), v.end());
  for (const auto& st : p.stages()) cur = apply_stage(st, cur);
  return cur;
}

FeatureSet apply_pipeline(const TransformPipeline& p, const FeatureSet& fs, std::size_t jobs) {
  if (!fs.empty() && fs.dim() != p.input_dim()) {
    throw DimensionError("pipeline expects " + std::to_string(p.input_dim()) +
                         "-d input, got " + std::to_string(fs.dim()));
  }
  FeatureSet cur = fs;
  for (const auto& st : p.stages()) cur = apply_stage(st, cur, jobs);
  return cur;
}

}  // namespace cbir
