// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "cbir/rng.hpp"
#include "cbir/simd.hpp"

using namespace cbir;

namespace {

struct Case {
  std::vector<double> a, b;
};

// Random data with exact zeros, shared zeros, negatives and large spreads
// mixed in, so every branch of the vector kernels is exercised.
Case make_case(Rng& rng, std::size_t n) {
  Case c{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto kind = rng.below(6);
    double x = rng.uniform(-3.0, 3.0), y = rng.uniform(-3.0, 3.0);
    if (kind == 0) x = 0.0;
    if (kind == 1) x = y = 0.0;
    if (kind == 2) y = x;
    if (kind == 3) x *= 1e6;
    c.a[i] = x;
    c.b[i] = y;
  }
  return c;
}

void expect_close(double ref, double got, const char* what, std::size_t n) {
  const double tol = 1e-12 * std::max(1.0, std::fabs(ref));
  EXPECT_NEAR(got, ref, tol) << what << " n=" << n;
}

}  // namespace

TEST(Simd, ScalarAlwaysAvailableAndActiveIsListed) {
  const auto isas = simd::available_isas();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), simd::Isa::scalar);
  bool listed = false;
  for (auto isa : isas) listed |= isa == simd::active().isa;
  EXPECT_TRUE(listed);
}

TEST(Simd, VariantsMatchScalarReference) {
  const auto& ref = simd::scalar_kernels();
  Rng rng(2024);
  for (auto isa : simd::available_isas()) {
    const auto* k = simd::kernels_for(isa);
    ASSERT_NE(k, nullptr);
    SCOPED_TRACE(std::string(simd::to_string(isa)));
    for (std::size_t n = 0; n <= 67; ++n) {
      for (int rep = 0; rep < 5; ++rep) {
        const Case c = make_case(rng, n);
        const double* a = c.a.data();
        const double* b = c.b.data();
        expect_close(ref.dot(a, b, n), k->dot(a, b, n), "dot", n);
        expect_close(ref.squared_l2(a, b, n), k->squared_l2(a, b, n), "squared_l2", n);
        expect_close(ref.l1(a, b, n), k->l1(a, b, n), "l1", n);
        expect_close(ref.hassanat(a, b, n), k->hassanat(a, b, n), "hassanat", n);
        expect_close(ref.canberra(a, b, n), k->canberra(a, b, n), "canberra", n);
      }
    }
    for (std::size_t n : {255u, 1024u, 4096u, 4099u}) {
      const Case c = make_case(rng, n);
      const double* a = c.a.data();
      const double* b = c.b.data();
      expect_close(ref.hassanat(a, b, n), k->hassanat(a, b, n), "hassanat", n);
      expect_close(ref.canberra(a, b, n), k->canberra(a, b, n), "canberra", n);
      expect_close(ref.l1(a, b, n), k->l1(a, b, n), "l1", n);
    }
  }
}

TEST(Simd, UnalignedPointers) {
  Rng rng(5);
  const Case c = make_case(rng, 101);
  const auto& ref = simd::scalar_kernels();
  for (auto isa : simd::available_isas()) {
    const auto* k = simd::kernels_for(isa);
    for (std::size_t off = 0; off < 4; ++off) {
      const std::size_t n = 101 - off;
      expect_close(ref.hassanat(c.a.data() + off, c.b.data() + off, n),
                   k->hassanat(c.a.data() + off, c.b.data() + off, n), "hassanat", n);
      expect_close(ref.squared_l2(c.a.data() + off, c.b.data(), n),
                   k->squared_l2(c.a.data() + off, c.b.data(), n), "squared_l2", n);
    }
  }
}
