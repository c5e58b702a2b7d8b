// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "cbir/error.hpp"
#include "cbir/eval.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cbir;

namespace {

std::vector<char> rel(std::initializer_list<int> v) { return std::vector<char>(v.begin(), v.end()); }

RankedResult ranking(const std::string& q, std::initializer_list<const char*> ids) {
  RankedResult r{q, {}};
  double d = 0.0;
  for (const char* id : ids) r.entries.push_back({id, d += 1.0});
  return r;
}

ExperimentSpec loocv_spec(const std::string& pipeline = "") {
  ExperimentSpec s;
  s.split.mode = SplitMode::loocv;
  s.stages = parse_stages(pipeline);
  return s;
}

}  // namespace

// --- Average precision -------------------------------------------------------

TEST(AveragePrecision, HandValues) {
  EXPECT_DOUBLE_EQ(average_precision(rel({1, 1, 0, 0})), 1.0);
  EXPECT_NEAR(average_precision(rel({1, 0, 1})), 0.833333, 1e-6);
  EXPECT_NEAR(average_precision(rel({0, 0, 1, 1})), (1.0 / 3 + 2.0 / 4) / 2, 1e-15);
  EXPECT_THROW(average_precision(rel({0, 0}), "q7"), EvaluationError);
  try {
    average_precision(rel({0}), "q7");
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("q7"), std::string::npos);
  }
}

TEST(AveragePrecision, FromRankedResult) {
  const LabelMap labels = {{"a", "x"}, {"b", "y"}, {"c", "x"}};
  const RankedResult r = ranking("q", {"a", "b", "c"});
  EXPECT_EQ(relevance(r, labels, "x"), rel({1, 0, 1}));
  EXPECT_NEAR(average_precision(r, labels, "x"), 0.833333, 1e-6);
}

TEST(AveragePrecisionProperty, BruteForceOracle) {
  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.below(30);
    std::vector<char> r(n);
    std::vector<int> ri(n);
    std::size_t R = 0;
    for (std::size_t i = 0; i < n; ++i) R += (r[i] = ri[i] = rng.uniform() < 0.4);
    if (R == 0) r[n - 1] = ri[n - 1] = 1, R = 1;
    const double ap = average_precision(r);
    EXPECT_NEAR(ap, oracle::average_precision(ri), 1e-12);
    EXPECT_GE(ap, 0.0);
    EXPECT_LE(ap, 1.0);
    // AP is 1 exactly when every relevant item precedes every irrelevant one
    const bool front = std::is_sorted(r.begin(), r.end(), std::greater<>());
    EXPECT_EQ(ap == 1.0, front);
  }
}

TEST(MeanAveragePrecision, HandValues) {
  const LabelMap labels = {{"q1", "x"}, {"q2", "x"}, {"a", "x"}, {"b", "y"}};
  const std::vector<RankedResult> one = {ranking("q1", {"a", "b"})};
  EXPECT_DOUBLE_EQ(mean_average_precision(one, labels), 1.0);
  const std::vector<RankedResult> two = {ranking("q1", {"a", "b"}), ranking("q2", {"b", "a"})};
  EXPECT_DOUBLE_EQ(mean_average_precision(two, labels), 0.75);
}

// --- PR curve and error rate ---------------------------------------------------------

TEST(PrCurve, HandValues) {
  const auto perfect = interpolated_precision(pr_curve(rel({1, 1, 0})));
  for (double p : perfect) EXPECT_EQ(p, 1.0);
  const auto curve = pr_curve(rel({1, 0, 1}));
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve.back().recall, 1.0);
  const auto ip = interpolated_precision(curve);
  EXPECT_NEAR(ip[10], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(ip[5], 1.0);
  EXPECT_NEAR(ip[6], 2.0 / 3.0, 1e-15);
}

TEST(PrCurveProperty, EndpointAndMonotoneInterpolation) {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<char> r(n, 0);
    for (auto& v : r) v = rng.uniform() < 0.3;
    r[rng.below(n)] = 1;
    const auto curve = pr_curve(r);
    EXPECT_DOUBLE_EQ(curve.back().recall, 1.0);
    const auto ip = interpolated_precision(curve);
    for (std::size_t l = 1; l < kPrLevels; ++l) EXPECT_LE(ip[l], ip[l - 1]);
  }
}

TEST(ErrorRate, HandValues) {
  const LabelMap labels = {{"q1", "x"}, {"q2", "x"}, {"q3", "y"}, {"q4", "y"},
                           {"a", "x"},  {"b", "y"}};
  std::vector<RankedResult> rs = {ranking("q1", {"a", "b"}), ranking("q2", {"a", "b"}),
                                  ranking("q3", {"b", "a"}), ranking("q4", {"b", "a"})};
  EXPECT_DOUBLE_EQ(error_rate(rs, labels), 0.0);
  rs[3] = ranking("q4", {"a", "b"});
  EXPECT_DOUBLE_EQ(error_rate(rs, labels), 0.25);
  const auto curve = error_rate_curve(rs, labels);
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_DOUBLE_EQ(curve[0], 0.25);
}

// --- Experiments --------------------------------------------------------------

TEST(Experiment, SeparatedClustersLoocv) {
  const FeatureSet fs = testsupport::clusters(10, 20, 8, 0.5, 3);
  ExperimentSpec s = loocv_spec();
  s.keep_rankings = true;
  const EvalReport r = run_experiment(fs, s);
  EXPECT_GE(r.map, 0.99);
  EXPECT_NEAR(r.map, 1.0, 1e-12);
  EXPECT_EQ(r.er, 0.0);
  EXPECT_EQ(r.queries.size(), 200u);
  EXPECT_EQ(r.gallery_size, 199u);
  ASSERT_EQ(r.rankings.size(), 200u);
  for (const auto& rr : r.rankings) {
    EXPECT_EQ(rr.entries.size(), 199u);
    for (const auto& e : rr.entries) ASSERT_NE(e.id, rr.query_id);
  }
  EXPECT_EQ(r.er_curve.size(), 19u);
  EXPECT_EQ(r.per_class_map.size(), 10u);
  EXPECT_EQ(r.config, "pipeline=none;metric=ed;split=loocv;seed=0");
}

TEST(Experiment, MapEqualsRecomputationFromRankings) {
  const FeatureSet fs = testsupport::clusters(4, 12, 6, 6.0, 4);
  for (auto mode : {SplitMode::loocv, SplitMode::holdout}) {
    ExperimentSpec s = loocv_spec("zscore");
    s.split.mode = mode;
    s.split.test_per_class = 3;
    s.metric = MetricKind::canberra;
    s.keep_rankings = true;
    const EvalReport r = run_experiment(fs, s);
    EXPECT_NEAR(r.map, mean_average_precision(r.rankings, fs.label_map()), 1e-12);
    EXPECT_NEAR(r.er, error_rate(r.rankings, fs.label_map()), 1e-15);
    EXPECT_LT(r.map, 1.0);
    if (mode == SplitMode::holdout) {
      EXPECT_EQ(r.queries.size(), 12u);
      EXPECT_EQ(r.gallery_size, 36u);
    }
  }
}

TEST(Experiment, DeterministicAndJobIndependent) {
  const FeatureSet fs = testsupport::sparse_generated(4, 15, 10, 5);
  ExperimentSpec s;
  s.split.test_per_class = 5;
  s.split.seed = 9;
  s.stages = parse_stages("sparse:size=6:iters=5:seed=1");
  const EvalReport a = run_experiment(fs, s);
  s.jobs = 3;
  const EvalReport b = run_experiment(fs, s);
  EXPECT_EQ(report_json(a), report_json(b));
  EXPECT_EQ(a.fingerprint, b.fingerprint);
  s.split.seed = 10;
  EXPECT_NE(run_experiment(fs, s).fingerprint, a.fingerprint);
}

TEST(Experiment, GalleryPermutationInvariant) {
  const FeatureSet fs = testsupport::clusters(5, 8, 4, 8.0, 6);
  std::vector<std::size_t> order(fs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  for (auto m : kAllMetrics) {
    ExperimentSpec s = loocv_spec();
    s.metric = m;
    EXPECT_EQ(run_experiment(fs, s).map, run_experiment(fs.subset(order), s).map);
  }
}

TEST(Experiment, MultiMetricMatchesSingleRuns) {
  const FeatureSet fs = testsupport::clusters(3, 10, 5, 4.0, 7);
  ExperimentSpec s = loocv_spec("dct:all,zscore");
  const auto many = run_experiment(fs, s, kAllMetrics);
  ASSERT_EQ(many.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    s.metric = kAllMetrics[i];
    EXPECT_EQ(report_json(many[i]), report_json(run_experiment(fs, s)));
  }
}

TEST(Experiment, StrictLoocvRefitsPerQuery) {
  const FeatureSet fs = testsupport::clusters(3, 6, 4, 5.0, 8);
  ExperimentSpec s = loocv_spec("zscore");
  const EvalReport loose = run_experiment(fs, s);
  s.strict_loocv = true;
  const EvalReport strict = run_experiment(fs, s);
  EXPECT_EQ(strict.queries.size(), 18u);
  EXPECT_NE(strict.config, loose.config);
  // identity pipeline: strict and loose coincide
  ExperimentSpec id = loocv_spec();
  const double base = run_experiment(fs, id).map;
  id.strict_loocv = true;
  EXPECT_EQ(run_experiment(fs, id).map, base);
}

TEST(Experiment, ErrorsCarryConfiguration) {
  const FeatureSet fs = testsupport::clusters(2, 5, 4, 1.0, 9);
  ExperimentSpec s;
  s.split.test_per_class = 5;
  try {
    run_experiment(fs, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("split=holdout:5"), std::string::npos) << e.what();
  }
  ExperimentSpec p = loocv_spec("pca:40");
  EXPECT_THROW(run_experiment(fs, p), PipelineError);
}

// --- Report files ------------------------------------------------------------------

TEST(Report, FilesAndFormats) {
  const FeatureSet fs = testsupport::clusters(3, 6, 4, 2.0, 10);
  const EvalReport r = run_experiment(fs, loocv_spec("zscore"));
  const auto dir = testsupport::temp_dir("report");
  const auto files = write_report(r, dir);
  EXPECT_EQ(files.size(), 5u);
  for (const char* f : {"report.json", "pr.csv", "er.csv", "queries.csv", "summary.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto j = nlohmann::json::parse(testsupport::slurp(dir / "report.json"));
  EXPECT_EQ(j["map"].get<double>(), r.map);
  EXPECT_EQ(j["queries"].get<std::size_t>(), 18u);
  EXPECT_EQ(j["pr11"].size(), 11u);
  EXPECT_EQ(testsupport::slurp(dir / "summary.txt"), flat_line(r));
  EXPECT_EQ(flat_line(r).rfind("config=pipeline=zscore;metric=ed;split=loocv;seed=0,map=", 0), 0u);
  const std::string pr = pr_csv(r);
  EXPECT_EQ(std::count(pr.begin(), pr.end(), '\n'), 12);
  const std::string q = queries_csv(r);
  EXPECT_EQ(std::count(q.begin(), q.end(), '\n'), 19);
}
