// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <numeric>

#include "cbir/error.hpp"
#include "cbir/eval.hpp"
#include "cbir/parallel.hpp"

namespace cbir {
namespace {

struct QueryWork {
  QueryOutcome outcome;
  std::array<double, kPrLevels> pr{};
  std::vector<double> precision_prefix;  // P@k for k = 1..R
  RankedResult ranking;
};

QueryWork score(const FeatureSet& gallery, std::span<const double> q, const std::string& q_id,
                const std::string& q_label, std::optional<std::size_t> exclude,
                MetricKind metric, bool keep) {
  std::vector<double> dist;
  const auto order = rank_indices(gallery, q, exclude, metric, &dist);
  std::vector<char> rel(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) rel[k] = gallery.label(order[k]) == q_label ? 1 : 0;

  QueryWork w;
  w.outcome.id = q_id;
  w.outcome.label = q_label;
  w.outcome.ap = average_precision(rel, q_id);
  const auto curve = pr_curve(rel, q_id);
  w.pr = interpolated_precision(curve);
  w.outcome.ap11 = std::accumulate(w.pr.begin(), w.pr.end(), 0.0) / static_cast<double>(kPrLevels);
  w.outcome.top1_correct = rel.front() == 1;
  w.outcome.relevant = static_cast<std::size_t>(std::count(rel.begin(), rel.end(), 1));
  w.precision_prefix.resize(w.outcome.relevant);
  for (std::size_t k = 0; k < w.outcome.relevant; ++k) w.precision_prefix[k] = curve[k].precision;
  if (keep) {
    w.ranking.query_id = q_id;
    w.ranking.entries.reserve(order.size());
    for (std::size_t i : order) w.ranking.entries.push_back({gallery.id(i), dist[i]});
  }
  return w;
}

EvalReport summarise(std::vector<QueryWork> work, const ExperimentSpec& spec) {
  EvalReport rep;
  if (work.empty()) throw EvaluationError("experiment issued no queries");
  const auto n = static_cast<double>(work.size());
  std::size_t L = work.front().precision_prefix.size();
  for (const auto& w : work) L = std::min(L, w.precision_prefix.size());
  rep.er_curve.assign(L, 0.0);
  std::map<std::string, std::pair<double, std::size_t>> per_class;
  std::size_t wrong = 0;
  // Sums run in query-id order, so neither scheduling nor storage order
  // moves the last bits.
  std::vector<std::size_t> by_id(work.size());
  std::iota(by_id.begin(), by_id.end(), std::size_t{0});
  std::sort(by_id.begin(), by_id.end(),
            [&](std::size_t a, std::size_t b) { return work[a].outcome.id < work[b].outcome.id; });
  for (std::size_t i : by_id) {
    const auto& w = work[i];
    rep.map += w.outcome.ap;
    rep.map11 += w.outcome.ap11;
    wrong += w.outcome.top1_correct ? 0 : 1;
    for (std::size_t l = 0; l < kPrLevels; ++l) rep.pr11[l] += w.pr[l];
    for (std::size_t k = 0; k < L; ++k) rep.er_curve[k] += w.precision_prefix[k];
    auto& pc = per_class[w.outcome.label];
    pc.first += w.outcome.ap;
    ++pc.second;
  }
  for (auto& w : work) {
    rep.queries.push_back(std::move(w.outcome));
    if (spec.keep_rankings) rep.rankings.push_back(std::move(w.ranking));
  }
  rep.map /= n;
  rep.map11 /= n;
  rep.er = static_cast<double>(wrong) / n;
  for (double& p : rep.pr11) p /= n;
  for (double& e : rep.er_curve) e = 1.0 - e / n;
  for (const auto& [label, acc] : per_class) {
    rep.per_class_map[label] = acc.first / static_cast<double>(acc.second);
  }
  return rep;
}

}  // namespace

std::string config_string(const ExperimentSpec& spec) {
  std::string split = to_string(spec.split.mode);
  if (spec.split.mode == SplitMode::holdout) {
    split += ":" + std::to_string(spec.split.test_per_class);
  } else if (spec.strict_loocv) {
    split += ":strict";
  }
  return "pipeline=" + format_stages(spec.stages, '+') + ";metric=" +
         std::string(short_name(spec.metric)) + ";split=" + split +
         ";seed=" + std::to_string(spec.split.seed);
}

std::vector<EvalReport> run_experiment(const FeatureSet& fs, const ExperimentSpec& spec,
                                       std::span<const MetricKind> metrics) {
  std::vector<std::string> configs;
  for (MetricKind m : metrics) {
    ExperimentSpec s = spec;
    s.metric = m;
    configs.push_back(config_string(s));
  }
  const std::string context = configs.empty() ? config_string(spec) : configs.front();
  try {
    if (metrics.empty()) throw EvaluationError("no metrics requested");
    const std::size_t M = metrics.size();
    // work[m][q]
    std::vector<std::vector<QueryWork>> work(M);
    std::size_t gallery_size = 0;
    if (spec.split.mode == SplitMode::holdout) {
      const Split split = stratified_split(fs, spec.split);
      const auto pipeline = fit_pipeline(spec.stages, split.train, spec.jobs);
      const FeatureSet gallery = apply_pipeline(pipeline, split.train, spec.jobs);
      const FeatureSet queries = apply_pipeline(pipeline, split.test, spec.jobs);
      gallery_size = gallery.size();
      for (auto& w : work) w.resize(queries.size());
      parallel_for(queries.size() * M, spec.jobs, [&](std::size_t t) {
        const std::size_t m = t / queries.size(), i = t % queries.size();
        work[m][i] = score(gallery, queries.row(i), queries.id(i), queries.label(i),
                           std::nullopt, metrics[m], spec.keep_rankings);
      });
    } else if (!spec.strict_loocv) {
      if (fs.size() < 2) throw EvaluationError("leave-one-out needs at least two items");
      const auto pipeline = fit_pipeline(spec.stages, fs, spec.jobs);
      const FeatureSet all = apply_pipeline(pipeline, fs, spec.jobs);
      gallery_size = all.size() - 1;
      for (auto& w : work) w.resize(all.size());
      parallel_for(all.size() * M, spec.jobs, [&](std::size_t t) {
        const std::size_t m = t / all.size(), i = t % all.size();
        work[m][i] = score(all, all.row(i), all.id(i), all.label(i), i, metrics[m],
                           spec.keep_rankings);
      });
    } else {
      if (fs.size() < 2) throw EvaluationError("leave-one-out needs at least two items");
      gallery_size = fs.size() - 1;
      for (auto& w : work) w.resize(fs.size());
      parallel_for(fs.size(), spec.jobs, [&](std::size_t i) {
        std::vector<std::size_t> rest;
        rest.reserve(fs.size() - 1);
        for (std::size_t j = 0; j < fs.size(); ++j) {
          if (j != i) rest.push_back(j);
        }
        const FeatureSet train = fs.subset(rest);
        const auto pipeline = fit_pipeline(spec.stages, train, 1);
        const FeatureSet gallery = apply_pipeline(pipeline, train, 1);
        const auto q = apply_pipeline(pipeline, fs.row(i));
        for (std::size_t m = 0; m < M; ++m) {
          work[m][i] = score(gallery, q, fs.id(i), fs.label(i), std::nullopt, metrics[m],
                             spec.keep_rankings);
        }
      });
    }
    std::vector<EvalReport> reports;
    for (std::size_t m = 0; m < M; ++m) {
      EvalReport rep = summarise(std::move(work[m]), spec);
      rep.config = configs[m];
      rep.gallery_size = gallery_size;
      rep.fingerprint = fnv1a64(configs[m], id_fingerprint(fs));
      reports.push_back(std::move(rep));
    }
    return reports;
  } catch (const EvaluationError& e) {
    throw EvaluationError(context + ": " + e.what());
  } catch (const PipelineError& e) {
    throw PipelineError(context + ": " + e.what());
  } catch (const SplitError& e) {
    throw SplitError(context + ": " + e.what());
  }
}

EvalReport run_experiment(const FeatureSet& fs, const ExperimentSpec& spec) {
  const MetricKind metric[] = {spec.metric};
  return std::move(run_experiment(fs, spec, metric).front());
}

}  // namespace cbir
