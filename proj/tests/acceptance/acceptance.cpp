// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, with wall-clock time
// against the budget. Exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbir/eval.hpp"
#include "cbir/feature_io.hpp"
#include "cbir/metrics.hpp"
#include "cbir/parallel.hpp"
#include "cbir/reduce.hpp"
#include "cbir/retrieval.hpp"
#include "cbir/simd.hpp"
#include "cbir/sparse.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cbir;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

enum class Verdict { pass, fail, skip };

struct Line {
  std::string name;
  Verdict verdict;
  double seconds;
  double budget;
  std::string detail;
};

std::vector<Line> g_lines;

void criterion(const std::string& name, double budget_seconds, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(secs < budget_seconds, "runtime over budget");
  g_lines.push_back({name, c.ok ? Verdict::pass : Verdict::fail, secs, budget_seconds, c.detail.str()});
  const Line& l = g_lines.back();
  std::printf("%s %s (%.2f s, budget %.0f s) %s\n", l.verdict == Verdict::pass ? "PASS" : "FAIL",
              l.name.c_str(), l.seconds, l.budget, l.detail.c_str());
  std::fflush(stdout);
}

void skip(const std::string& name, const std::string& why) {
  g_lines.push_back({name, Verdict::skip, 0.0, 0.0, why});
  std::printf("SKIP %s %s\n", name.c_str(), why.c_str());
}

// ---------------------------------------------------------------------------

void metric_correctness(Check& c) {
  using V = std::vector<double>;
  auto near = [](double a, double b) { return std::fabs(a - b) <= 1e-6; };
  c.require(near(euclidean(V{0, 0}, V{3, 4}), 5.0), "ED([0,0],[3,4])");
  c.require(near(euclidean(V{1, 2, 3}, V{4, 6, 3}), 5.0), "ED([1,2,3],[4,6,3])");
  c.require(near(manhattan(V{0, 0}, V{3, 4}), 7.0), "MD([0,0],[3,4])");
  c.require(near(manhattan(V{-1}, V{1}), 2.0), "MD([-1],[1])");
  c.require(near(hassanat(V{0}, V{0}), 0.0), "HD([0],[0])");
  c.require(near(hassanat(V{1}, V{3}), 0.5), "HD([1],[3])");
  c.require(near(hassanat(V{-1}, V{1}), 0.666667), "HD([-1],[1])");
  c.require(near(canberra(V{0}, V{0}), 0.0), "CD([0],[0])");
  c.require(near(canberra(V{1}, V{3}), 0.5), "CD([1],[3])");
  c.require(near(canberra(V{2, 0}, V{0, 2}), 2.0), "CD([2,0],[0,2])");

  Rng rng(20240601);
  std::size_t pairs = 0, max_hd_terms = 0;
  double worst_oracle = 0.0;
  for (; pairs < 10000; ++pairs) {
    const std::size_t d = 1 + rng.below(4096);
    V a = testsupport::random_vector(rng, d, -100, 100);
    V b = testsupport::random_vector(rng, d, -100, 100);
    // sprinkle exact zeros, shared values and outliers
    for (std::size_t j = 0; j < d; j += 1 + rng.below(7)) {
      switch (rng.below(4)) {
        case 0: a[j] = 0.0; break;
        case 1: a[j] = b[j] = 0.0; break;
        case 2: b[j] = a[j]; break;
        default: b[j] = 1e9 * (rng.uniform() < 0.5 ? -1 : 1);
      }
    }
    for (auto k : kAllMetrics) {
      const double ab = distance(k, a, b);
      if (!(ab == distance(k, b, a))) return c.require(false, "symmetry");
      if (!(ab >= 0.0)) return c.require(false, "nonnegativity");
      if (distance(k, a, a) != 0.0) return c.require(false, "identity");
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!(simd::hassanat_term(a[j], b[j]) < 1.0)) return c.require(false, "HD term < 1");
      if (!(simd::canberra_term(a[j], b[j]) <= 1.0)) return c.require(false, "CD term <= 1");
    }
    max_hd_terms = std::max(max_hd_terms, d);
    if (pairs % 50 == 0) {
      const double h = std::fabs(hassanat(a, b) - oracle::hassanat(a, b)) / static_cast<double>(d);
      const double cd = std::fabs(canberra(a, b) - oracle::canberra(a, b)) / static_cast<double>(d);
      worst_oracle = std::max({worst_oracle, h, cd});
    }
  }
  c.require(worst_oracle < 1e-12, "oracle agreement");
  c.detail << "pairs=" << pairs << " max_dim=" << max_hd_terms << " isa="
           << simd::to_string(simd::active().isa) << " oracle_dev_per_term=" << worst_oracle;
}

void transform_properties(Check& c) {
  Rng rng(7);
  double worst = 0.0;
  for (std::size_t n : {1u, 2u, 3u, 17u, 64u, 100u, 255u, 512u, 1000u, 2048u, 4095u, 4096u}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto x = testsupport::random_vector(rng, n, -10, 10);
      const auto X = dct_forward(x);
      double nx = 0, nX = 0;
      for (double v : x) nx += v * v;
      for (double v : X) nX += v * v;
      worst = std::max(worst, std::fabs(std::sqrt(nX) - std::sqrt(nx)) / std::max(1.0, std::sqrt(nx)));
    }
  }
  c.require(worst <= 1e-9, "DCT norm preservation");
  const auto x = testsupport::random_vector(rng, 4096);
  std::vector<std::size_t> ladder = {x.size()};
  for (std::size_t L = 1; L <= 3; ++L) ladder.push_back(haar_reduce(x, L).size());
  c.require(ladder == std::vector<std::size_t>{4096, 2048, 1024, 512}, "Haar ladder");
  double pdf_dev = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t bins = 1 + rng.below(256);
    const auto v = testsupport::random_vector(rng, 1 + rng.below(4096), -5, 5);
    for (const auto& spec : {PdfSpec{bins, std::nullopt}, PdfSpec{bins, std::pair{-2.0, 2.0}}}) {
      const auto h = pdf_reduce(v, spec);
      double s = 0.0;
      for (double p : h) s += p;
      pdf_dev = std::max(pdf_dev, std::fabs(s - 1.0));
    }
  }
  c.require(pdf_dev <= 1e-12, "PDF sums to one");
  c.detail << "dct_rel_norm_dev=" << worst << " ladder=4096/2048/1024/512 pdf_sum_dev=" << pdf_dev;
}

void solver_agreement(Check& c) {
  Rng rng(99);
  double worst_obj = 0.0, worst_kkt = 0.0, worst_en = 0.0;
  for (int t = 0; t < 200; ++t) {
    const MatrixXd D = testsupport::random_dictionary(rng, 20, 50);
    VectorXd x(20);
    for (Eigen::Index i = 0; i < 20; ++i) x(i) = rng.normal();
    const double lam = 0.1 * lambda_max(D, x);
    const SparseProblem p(D);
    auto spec = [&](ClAlgorithm a) {
      ClSpec s = ClSpec::absolute(a, lam, 0.0);
      s.tol = 1e-12;
      s.max_iter = 200000;
      return s;
    };
    const VectorXd h = solve(p, x, spec(ClAlgorithm::homotopy)).coefficients;
    const VectorXd l = solve(p, x, spec(ClAlgorithm::lasso)).coefficients;
    const VectorXd s = solve(p, x, spec(ClAlgorithm::ssf)).coefficients;
    const VectorXd e = solve(p, x, spec(ClAlgorithm::elastic_net)).coefficients;
    const double fh = sr_objective(D, x, h, lam), fl = sr_objective(D, x, l, lam),
                 fs = sr_objective(D, x, s, lam);
    worst_obj = std::max({worst_obj, std::fabs(fh - fl), std::fabs(fs - fl), std::fabs(fh - fs)});
    worst_kkt = std::max({worst_kkt, kkt_violation(D, x, h, lam), kkt_violation(D, x, l, lam),
                          kkt_violation(D, x, s, lam)});
    worst_en = std::max(worst_en, (e - l).cwiseAbs().maxCoeff());
  }
  c.require(worst_obj <= 1e-6, "objective agreement");
  c.require(worst_kkt <= 1e-6, "KKT residual");
  c.require(worst_en <= 1e-8, "elastic net at lambda2=0");
  c.detail << "problems=200 max_obj_gap=" << worst_obj << " max_kkt=" << worst_kkt
           << " max_en_lasso_gap=" << worst_en;
}

void ksvd_recovery(Check& c) {
  Rng rng(31337);
  const MatrixXd truth = testsupport::random_dictionary(rng, 64, 20);
  MatrixXd S = MatrixXd::Zero(64, 500);
  for (Eigen::Index i = 0; i < S.cols(); ++i) {
    std::vector<Eigen::Index> used;
    while (used.size() < 3) {
      const auto k = static_cast<Eigen::Index>(rng.below(20));
      if (std::find(used.begin(), used.end(), k) == used.end()) used.push_back(k);
    }
    for (auto k : used) S.col(i) += rng.normal() * truth.col(k);
  }
  std::vector<double> trace;
  const Dictionary d = learn_ksvd(S, 20, 3, 50, 1, &trace);
  int recovered = 0;
  for (Eigen::Index k = 0; k < 20; ++k) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < 20; ++j) best = std::max(best, std::fabs(d.atoms().col(j).dot(truth.col(k))));
    recovered += best > 0.99;
  }
  bool monotone = trace.size() == 50;
  for (std::size_t i = 1; i < trace.size(); ++i) monotone = monotone && trace[i] <= trace[i - 1];
  c.require(recovered >= 18, "atoms recovered");
  c.require(monotone, "objective nonincreasing");
  c.detail << "recovered=" << recovered << "/20 objective " << trace.front() << " -> " << trace.back();
}

void evaluation_oracle(Check& c) {
  Rng rng(5);
  int exact = 0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(30);
    RankedResult r{"q", {}};
    LabelMap labels{{"q", "x"}};
    std::vector<int> rel(n);
    for (std::size_t i = 0; i < n; ++i) {
      rel[i] = rng.uniform() < 0.4;
      if (i + 1 == n && std::count(rel.begin(), rel.end(), 1) == 0) rel[i] = 1;
      const std::string id = "g" + std::to_string(i);
      r.entries.push_back({id, static_cast<double>(i)});
      labels[id] = rel[i] ? "x" : "y";
    }
    exact += average_precision(r, labels, "x") == oracle::average_precision(rel);
  }
  c.require(exact == 50, "AP equals enumeration");
  ExperimentSpec spec;
  spec.split.mode = SplitMode::loocv;
  const EvalReport rep = run_experiment(testsupport::clusters(10, 20, 16, 0.5, 11), spec);
  c.require(rep.map >= 0.99, "separated clusters MAP");
  c.require(rep.queries.size() == 200 && rep.gallery_size == 199, "LOOCV query counts");
  c.detail << "exact_ap=" << exact << "/50 loocv_map=" << rep.map;
}

void end_to_end(Check& c) {
  const FeatureSet fs = testsupport::sparse_generated(10, 100, 64, 2025);
  ExperimentSpec spec;
  spec.split = {SplitMode::holdout, 10, 1};
  spec.stages = parse_stages("sparse:method=ksvd:size=10:cl=homotopy");
  spec.metric = MetricKind::euclidean;
  const EvalReport rep = run_experiment(fs, spec);
  c.require(rep.map >= 0.90, "MAP >= 0.90");
  c.require(rep.queries.size() == 100 && rep.gallery_size == 900, "holdout shape");
  c.detail << "map=" << rep.map << " er=" << rep.er << " queries=" << rep.queries.size()
           << " gallery=" << rep.gallery_size;
}

// Runs the reference configurations on externally supplied features.
void full_scale(const std::filesystem::path& root) {
  auto file = [&](const char* name) -> std::optional<std::filesystem::path> {
    const auto p = root / name;
    if (std::filesystem::exists(p)) return p;
    return std::nullopt;
  };
  struct Target {
    const char* name;
    const char* features;
    const char* manifest;
    std::size_t test_per_class;
    std::string stage_prefix;
    bool sweep_lambda;
    SplitMode mode;
    MetricKind metric;
    double target;
  };
  const Target targets[] = {
      {"full-scale corel vgg16-fc7 ksvd10 homotopy ED holdout", "corel_vgg16_fc7.cbfv",
       "corel_manifest.csv", 10, "sparse:method=ksvd:size=10:cl=homotopy:lambda=", true,
       SplitMode::holdout, MetricKind::euclidean, 0.95},
      {"full-scale coil vgg19-fc7 kmeans20 ssf ED holdout", "coil_vgg19_fc7.cbfv",
       "coil_manifest.csv", 6, "sparse:method=kmeans:size=20:cl=ssf:lambda=", true,
       SplitMode::holdout, MetricKind::euclidean, 0.93},
      {"full-scale corel vgg19-fc7 dct+zscore CD loocv", "corel_vgg19_fc7.cbfv",
       "corel_manifest.csv", 0, "dct:all,zscore", false, SplitMode::loocv, MetricKind::canberra,
       0.873},
  };
  for (const auto& t : targets) {
    const auto f = file(t.features);
    const auto m = file(t.manifest);
    if (!f || !m) {
      skip(t.name, std::string("missing ") + t.features + " or " + t.manifest);
      continue;
    }
    criterion(t.name, 36000, [&](Check& c) {
      const FeatureSet fs = load_feature_set(*f, *m);
      ExperimentSpec spec;
      spec.split = {t.mode, t.test_per_class, 0};
      spec.metric = t.metric;
      spec.jobs = default_jobs();
      double best = -1.0;
      std::string best_cfg;
      const std::vector<std::string> lambdas =
          t.sweep_lambda ? std::vector<std::string>{"0.01", "0.05", "0.1", "0.2", "0.3", "0.5"}
                         : std::vector<std::string>{""};
      for (const auto& l : lambdas) {
        spec.stages = parse_stages(t.stage_prefix + l);
        const EvalReport r = run_experiment(fs, spec);
        if (r.map > best) best = r.map, best_cfg = r.config;
      }
      c.require(std::fabs(best - t.target) <= 0.05, "MAP within 0.05 of target");
      c.detail << "best_map=" << best << " target=" << t.target << " config=" << best_cfg;
    });
  }
}

}  // namespace

int main() {
  criterion("metric correctness", 10, metric_correctness);
  criterion("DCT/DWT/PDF properties", 5, transform_properties);
  criterion("solver cross-agreement", 60, solver_agreement);
  criterion("K-SVD recovery", 120, ksvd_recovery);
  criterion("evaluation oracle", 10, evaluation_oracle);
  criterion("end-to-end synthetic SR pipeline", 120, end_to_end);
  if (const char* root = std::getenv("CBIR_FULL_DATA"); root && *root) {
    full_scale(root);
  } else {
    skip("full-scale reproduction", "not run by default; set CBIR_FULL_DATA to a directory of "
                                     "extracted deep features to enable");
  }
  const bool failed = std::any_of(g_lines.begin(), g_lines.end(),
                                  [](const Line& l) { return l.verdict == Verdict::fail; });
  std::printf("%s\n", failed ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return failed ? 1 : 0;
}
