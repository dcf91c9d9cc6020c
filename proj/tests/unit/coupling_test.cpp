#include "smoothol/coupling.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "smoothol/errors.hpp"
#include "smoothol/stats.hpp"

namespace smoothol {
namespace {

ContextSampler uniform_atoms(std::size_t n) {
  return [n](Rng& r) { return Context::atom(r.uniform_int(n)); };
}

TEST(CoupleRound, SigmaOneAlwaysHits) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto d = couple_round([](const Context&) { return 1.0; }, 1.0, 3, uniform_atoms(10), uniform_atoms(10), rng);
    ASSERT_TRUE(d.hit);
    ASSERT_EQ(d.accepted.size(), 3u);
    EXPECT_TRUE(std::find(d.candidates.begin(), d.candidates.end(), d.x) != d.candidates.end());
  }
}

TEST(CoupleRound, NoCandidatesFallsBack) {
  Rng rng(2);
  const auto d = couple_round([](const Context&) { return 1.0; }, 0.5, 0, uniform_atoms(10),
                              [](Rng&) { return Context::atom(42); }, rng);
  EXPECT_FALSE(d.hit);
  EXPECT_TRUE(d.candidates.empty());
  EXPECT_EQ(d.x, Context::atom(42));
}

TEST(CoupleRound, RatioAboveBoundThrows) {
  Rng rng(3);
  try {
    couple_round([](const Context&) { return 2.5; }, 0.5, 2, uniform_atoms(4), uniform_atoms(4), rng);
    FAIL();
  } catch (const SmoothnessViolation& e) {
    EXPECT_STREQ(e.what(), "smoothness violated");
  }
}

TEST(CoupleRound, HitImpliesAcceptedCandidate) {
  Rng rng(4);
  const auto ratio = [](const Context& x) { return x.id() < 5 ? 2.0 : 0.0; };
  const auto p = [](Rng& r) { return Context::atom(r.uniform_int(5)); };
  for (int i = 0; i < 2000; ++i) {
    const auto d = couple_round(ratio, 0.5, 4, uniform_atoms(10), p, rng);
    ASSERT_LE(d.accepted.size(), 4u);
    if (d.hit) {
      bool in = false;
      for (auto j : d.accepted) in = in || d.candidates[j] == d.x;
      ASSERT_TRUE(in);
    }
    ASSERT_LT(d.x.id(), 5u);
  }
}

TEST(CoupleRound, ConcentratedMissRate) {
  const double sigma = 0.5;
  const auto cfg = concentrated_coupling_config(sigma, 2, 10, 5);
  const auto r = validate_coupling(cfg, 100000);
  const double q = 0.25;
  EXPECT_NEAR(r.miss_rate, q, 3 * binomial_std(q, r.trials));
  EXPECT_DOUBLE_EQ(r.bound, q);
}

TEST(ValidateCoupling, SigmaOneNeverMisses) {
  CouplingConfig cfg{DiscreteMeasure::uniform(10), DiscreteMeasure::uniform(10), 1.0, 3, 11};
  const auto r = validate_coupling(cfg, 100000);
  EXPECT_EQ(r.misses, 0u);
  EXPECT_EQ(r.miss_rate, 0.0);
  EXPECT_GT(r.x_marginal_pvalue, 0.01);
  EXPECT_GT(r.z_marginal_pvalue, 0.01);
}

TEST(ValidateCoupling, MissRateBelowAnalyticBound) {
  auto cfg = concentrated_coupling_config(0.3, 10, 10, 13);
  // A smoother p than the extreme one.
  std::vector<double> w{3, 3, 3, 1, 1, 1, 1, 1, 1, 1};
  cfg.p = DiscreteMeasure::from_weights(w);
  const auto r = validate_coupling(cfg, 100000);
  const double bound = std::pow(0.7, 10);
  EXPECT_NEAR(r.bound, 0.0282475249, 1e-9);
  EXPECT_LE(r.bound, r.loose_bound);
  EXPECT_LE(r.miss_rate, bound + 3 * binomial_std(bound, r.trials));
  EXPECT_GT(r.x_marginal_pvalue, 0.01);
  EXPECT_GT(r.z_marginal_pvalue, 0.01);
}

TEST(ValidateCoupling, InsufficientTrials) {
  CouplingConfig cfg{DiscreteMeasure::uniform(4), DiscreteMeasure::uniform(4), 1.0, 1, 0};
  try {
    validate_coupling(cfg, 999);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "insufficient trials");
  }
}

TEST(ValidateCoupling, NonSmoothConfigIsRejected) {
  CouplingConfig cfg{DiscreteMeasure::uniform(4), DiscreteMeasure({1.0, 0, 0, 0}), 0.5, 1, 0};
  EXPECT_THROW(validate_coupling(cfg, 1000), SmoothnessViolation);
}

}  // namespace
}  // namespace smoothol
