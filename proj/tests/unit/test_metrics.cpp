// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "cbir/error.hpp"
#include "cbir/metrics.hpp"
#include "cbir/simd.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace cbir;
using V = std::vector<double>;

TEST(Metrics, HandValues) {
  EXPECT_DOUBLE_EQ(euclidean(V{0, 0}, V{3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(euclidean(V{1, 2, 3}, V{4, 6, 3}), 5.0);
  EXPECT_DOUBLE_EQ(manhattan(V{0, 0}, V{3, 4}), 7.0);
  EXPECT_DOUBLE_EQ(manhattan(V{-1}, V{1}), 2.0);
  EXPECT_DOUBLE_EQ(hassanat(V{0}, V{0}), 0.0);
  EXPECT_DOUBLE_EQ(hassanat(V{1}, V{3}), 0.5);
  EXPECT_NEAR(hassanat(V{-1}, V{1}), 2.0 / 3.0, 1e-6);
  EXPECT_DOUBLE_EQ(canberra(V{0}, V{0}), 0.0);
  EXPECT_DOUBLE_EQ(canberra(V{1}, V{3}), 0.5);
  EXPECT_DOUBLE_EQ(canberra(V{2, 0}, V{0, 2}), 2.0);
}

TEST(Metrics, IdentityOnAnyVector) {
  const V v = {1.5, -2.0, 0.0, 7.0};
  for (auto k : kAllMetrics) EXPECT_EQ(distance(k, v, v), 0.0);
}

TEST(Metrics, DispatchAndNames) {
  EXPECT_DOUBLE_EQ(distance(MetricKind::euclidean, V{0, 0}, V{3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(distance(MetricKind::hassanat, V{1}, V{3}), 0.5);
  EXPECT_DOUBLE_EQ(distance(MetricKind::canberra, V{0}, V{0}), 0.0);
  for (auto k : kAllMetrics) EXPECT_EQ(parse_metric(short_name(k)), k);
  EXPECT_THROW(parse_metric("xx"), SpecError);
}

TEST(Metrics, LengthMismatch) {
  for (auto k : kAllMetrics) EXPECT_THROW(distance(k, V{1, 2}, V{1}), DimensionError);
}

TEST(Metrics, BothNegativeHassanatUsesLowerBranch) {
  // lo = -3, hi = -1: 1 - (1 - 3 + 3) / (1 - 1 + 3) = 2/3
  EXPECT_NEAR(hassanat(V{-3}, V{-1}), 2.0 / 3.0, 1e-15);
}

TEST(Metrics, CanberraOneZeroOperandIsOne) {
  EXPECT_DOUBLE_EQ(canberra(V{0}, V{5}), 1.0);
  EXPECT_DOUBLE_EQ(canberra(V{-2}, V{0}), 1.0);
}

TEST(MetricsProperty, AgainstOracleSymmetricBounded) {
  Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t d = 1 + rng.below(64);
    const V a = testsupport::random_vector(rng, d, -50, 50);
    const V b = testsupport::random_vector(rng, d, -50, 50);
    EXPECT_NEAR(euclidean(a, b), oracle::euclidean(a, b), 1e-9 * (1 + oracle::euclidean(a, b)));
    EXPECT_NEAR(manhattan(a, b), oracle::manhattan(a, b), 1e-9 * (1 + oracle::manhattan(a, b)));
    EXPECT_NEAR(hassanat(a, b), oracle::hassanat(a, b), 1e-9 * d);
    EXPECT_NEAR(canberra(a, b), oracle::canberra(a, b), 1e-9 * d);
    for (auto k : kAllMetrics) {
      EXPECT_EQ(distance(k, a, b), distance(k, b, a));
      EXPECT_GE(distance(k, a, b), 0.0);
    }
    for (std::size_t j = 0; j < d; ++j) {
      EXPECT_LT(simd::hassanat_term(a[j], b[j]), 1.0);
      EXPECT_LE(simd::canberra_term(a[j], b[j]), 1.0);
    }
  }
}

TEST(MetricsProperty, TriangleInequality) {
  Rng rng(12);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + rng.below(16);
    const V a = testsupport::random_vector(rng, d), b = testsupport::random_vector(rng, d),
            c = testsupport::random_vector(rng, d);
    for (auto k : {MetricKind::euclidean, MetricKind::manhattan}) {
      EXPECT_LE(distance(k, a, c), distance(k, a, b) + distance(k, b, c) + 1e-12);
    }
  }
}

TEST(MetricsProperty, HassanatOutlierChangesTotalByLessThanOne) {
  Rng rng(13);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 1 + rng.below(32);
    const V a = testsupport::random_vector(rng, d, -5, 5);
    V b = testsupport::random_vector(rng, d, -5, 5);
    const double before = hassanat(a, b);
    b[rng.below(d)] += (rng.uniform() < 0.5 ? -1 : 1) * 1e9;
    EXPECT_LT(std::fabs(hassanat(a, b) - before), 1.0);
  }
}

TEST(MetricsProperty, CanberraScaleInvariant) {
  Rng rng(14);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 1 + rng.below(32);
    V a = testsupport::random_vector(rng, d), b = testsupport::random_vector(rng, d);
    const double before = canberra(a, b);
    const double s = rng.uniform(0.01, 100.0);
    for (auto& x : a) x *= s;
    for (auto& x : b) x *= s;
    EXPECT_NEAR(canberra(a, b), before, 1e-12 * d);
  }
}
