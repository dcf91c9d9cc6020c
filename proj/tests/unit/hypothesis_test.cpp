#include "smoothol/hypothesis.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "smoothol/errors.hpp"

namespace smoothol {
namespace {

TEST(ThresholdClass, GridAndEvaluation) {
  const auto cls = ThresholdClass::grid(5);
  ASSERT_EQ(cls.size(), 5u);
  EXPECT_EQ(cls.kind(), ClassKind::binary);
  EXPECT_DOUBLE_EQ(cls.threshold(1), 0.25);
  EXPECT_EQ(cls.at(1, Context::point(0.25)), 1.0);
  EXPECT_EQ(cls.at(1, Context::point(0.2)), -1.0);
  EXPECT_EQ(cls.at(0, Context::point(0.0)), 1.0);
  std::vector<double> out(5);
  cls.evaluate_all(Context::point(0.6), out);
  EXPECT_EQ(out, (std::vector<double>{1, 1, 1, -1, -1}));
  EXPECT_THROW(cls.at(0, Context::atom(2)), DomainMismatch);
}

TEST(ThresholdClass, EvaluateAllAgreesWithEvaluate) {
  const auto cls = ThresholdClass::grid(64);
  std::vector<double> out(cls.size());
  for (int i = 0; i <= 100; ++i) {
    const auto x = Context::point(i / 100.0);
    cls.evaluate_all(x, out);
    for (std::size_t h = 0; h < cls.size(); ++h) ASSERT_EQ(out[h], cls.evaluate(h, x));
  }
}

TEST(ThresholdClass, FittedRealizesEveryThresholdLabelling) {
  const std::vector<double> pts{0.5, 0.0, 1.0, 0.75, 0.5};
  const auto cls = ThresholdClass::fitted(pts);
  std::set<std::vector<double>> patterns;
  for (std::size_t h = 0; h < cls.size(); ++h) {
    std::vector<double> row;
    for (double p : pts) row.push_back(cls.at(h, Context::point(p)));
    patterns.insert(row);
  }
  // 4 distinct points admit 5 threshold labellings.
  EXPECT_EQ(patterns.size(), 5u);
}

TEST(TableClass, KindAndDomain) {
  TableClass bin({{1, -1}, {-1, 1}});
  EXPECT_EQ(bin.kind(), ClassKind::binary);
  TableClass real({{0.5, -1}, {-1, 1}});
  EXPECT_EQ(real.kind(), ClassKind::real_valued);
  EXPECT_EQ(real.at(0, Context::atom(0)), 0.5);
  EXPECT_THROW(real.at(0, Context::atom(2)), DomainMismatch);
  EXPECT_THROW(real.at(0, Context::point(0.5)), DomainMismatch);
  EXPECT_THROW(TableClass(std::vector<std::vector<double>>{{2.0}}), std::invalid_argument);
  EXPECT_THROW(TableClass(std::vector<std::vector<double>>{{1.0}, {1.0, 1.0}}), std::invalid_argument);
}

TEST(FunctionClass, Constants) {
  const auto cls = FunctionClass::constants({1.0, -1.0});
  EXPECT_EQ(cls.kind(), ClassKind::binary);
  EXPECT_EQ(cls.at(1, Context::atom(9)), -1.0);
  EXPECT_EQ(FunctionClass::constants({0.5}).kind(), ClassKind::real_valued);
}

TEST(AnchoredClass, AnchorEvaluatesToOne) {
  auto base = std::make_shared<ThresholdClass>(ThresholdClass::grid(4));
  AnchoredClass cls(base, 10);
  EXPECT_EQ(cls.size(), 4u);
  for (std::size_t h = 0; h < 4; ++h) {
    EXPECT_EQ(cls.at(h, cls.anchor()), 1.0);
    EXPECT_EQ(cls.at(h, Context::point(0.1)), base->at(h, Context::point(0.1)));
  }
  const auto mu = ContextMeasure::finite(DiscreteMeasure::uniform(10));
  const auto tilde = AnchoredClass::anchored_measure(mu);
  ASSERT_EQ(tilde.size(), 11u);
  EXPECT_NEAR(tilde.probabilities()[10], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(tilde.probabilities()[0], 1.0 / 30.0, 1e-12);
  EXPECT_EQ(tilde.atom(10).id(), 10u);
}

TEST(ShatteredClass, AllPatternsAndVanishingPoint) {
  const auto cls = make_shattered_class(3, 0.5);
  ASSERT_EQ(cls.size(), 8u);
  std::set<std::vector<double>> patterns;
  for (std::size_t h = 0; h < 8; ++h) {
    EXPECT_EQ(cls.at(h, Context::atom(3)), 0.0);
    std::vector<double> row;
    for (std::size_t i = 0; i < 3; ++i) row.push_back(cls.at(h, Context::atom(i)));
    patterns.insert(row);
  }
  EXPECT_EQ(patterns.size(), 8u);
}

}  // namespace
}  // namespace smoothol
