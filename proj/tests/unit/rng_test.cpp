#include "smoothol/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "smoothol/stats.hpp"

namespace smoothol {
namespace {

TEST(Splitmix64, MatchesReferenceOutputsForZeroState) {
  // First outputs of the reference splitmix64 seeded with 0.
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(state), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(splitmix64(state), 0x06c45d188009454fULL);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DifferentSeedsDiffer) {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, SplitDoesNotAdvanceParentAndChildrenDiffer) {
  Rng parent(7);
  Rng copy = parent;
  Rng c1 = parent.split(1);
  Rng c2 = parent.split(2);
  Rng c1_again = parent.split(1);
  EXPECT_EQ(parent.next_u64(), copy.next_u64());
  const auto x1 = c1.next_u64();
  EXPECT_NE(x1, c2.next_u64());
  EXPECT_EQ(x1, c1_again.next_u64());
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(3);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_LT(lo, 1e-4);
  EXPECT_GT(hi, 1 - 1e-4);
  EXPECT_NEAR(sum / n, 0.5, 4 * std::sqrt(1.0 / 12 / n));
}

TEST(Rng, UniformIntIsUniform) {
  Rng r(11);
  const std::size_t k = 7;
  std::vector<std::uint64_t> counts(k, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = r.uniform_int(k);
    ASSERT_LT(v, k);
    ++counts[v];
  }
  std::vector<double> p(k, 1.0 / k);
  EXPECT_GT(chi_squared_pvalue(counts, p), 0.01);
}

TEST(Rng, UniformIntOfOneIsZero) {
  Rng r(5);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(r.uniform_int(1), 0u);
}

TEST(Rng, NormalMoments) {
  Rng r(19);
  const int n = 200000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 4 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 4 * std::sqrt(96.0 / n));
}

TEST(Rng, RademacherIsBalancedSign) {
  Rng r(23);
  const int n = 100000;
  int sum = 0;
  for (int i = 0; i < n; ++i) {
    const int e = r.rademacher();
    ASSERT_TRUE(e == 1 || e == -1);
    sum += e;
  }
  EXPECT_LT(std::abs(sum), 4 * std::sqrt(n));
}

TEST(Rng, BernoulliRate) {
  Rng r(29);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += r.bernoulli(0.3);
  EXPECT_NEAR(hits / double(n), 0.3, 4 * binomial_std(0.3, n));
  EXPECT_FALSE(Rng(1).bernoulli(0.0));
  EXPECT_TRUE(Rng(1).bernoulli(1.0));
}

}  // namespace
}  // namespace smoothol
