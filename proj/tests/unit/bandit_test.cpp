#include "smoothol/bandit.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "smoothol/errors.hpp"
#include "smoothol/ftpl.hpp"
#include "smoothol/relax.hpp"

namespace smoothol {
namespace {

TEST(Igw, EqualPredictionsAreUniform) {
  const std::vector<double> y(5, 0.3);
  for (double p : igw_distribution(y, 7.0)) EXPECT_NEAR(p, 0.2, 1e-15);
}

TEST(Igw, TwoActionExample) {
  const std::vector<double> y{0.0, 1.0};
  const auto p = igw_distribution(y, 2.0);
  EXPECT_DOUBLE_EQ(p[0], 0.75);
  EXPECT_DOUBLE_EQ(p[1], 0.25);
}

TEST(Igw, ExploitationLimit) {
  const std::vector<double> y{0.4, 0.1, 0.9};
  const auto p = igw_distribution(y, 1e9);
  EXPECT_NEAR(p[1], 1.0, 1e-6);
}

TEST(Igw, TiesGoToLowestIndex) {
  const std::vector<double> y{0.5, 0.2, 0.2};
  const auto p = igw_distribution(y, 4.0);
  EXPECT_GT(p[1], p[2]);
  EXPECT_DOUBLE_EQ(p[2], 1.0 / 3.0);
}

TEST(Igw, FuzzValidDistribution) {
  Rng rng(1);
  for (int rep = 0; rep < 100000; ++rep) {
    const std::size_t K = 2 + rng.uniform_int(15);
    const double gamma = 0.1 * std::pow(1e5, rng.uniform());
    std::vector<double> y(K);
    for (double& v : y) v = rng.uniform();
    const auto p = igw_distribution(y, gamma);
    double total = 0.0;
    for (double q : p) {
      ASSERT_GT(q, 0.0);
      total += q;
    }
    ASSERT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Compose, Examples) {
  EXPECT_EQ(compose_smoothness(1.0, 1), 1.0);
  EXPECT_EQ(compose_smoothness(0.5, 4), 0.125);
  EXPECT_THROW(compose_smoothness(0.0, 2), std::invalid_argument);
}

TEST(Compose, JointEmpiricalDensity) {
  // x from a sigma-smooth law, a from an arbitrary rule; the pair law is
  // sigma / K smooth against mu x Unif([K]).
  const std::size_t N = 10, K = 4;
  const double sigma = 0.5;
  const auto mu = DiscreteMeasure::uniform(N);
  const auto p = concentrated_measure(mu, midpoint_coordinates(N), sigma, 0.0);
  const auto joint = product_measure(mu, K);
  Rng rng(2);
  const int n = 100000;
  std::vector<double> counts(N * K, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto x = p.sample(rng);
    const std::size_t a = x % 2 == 0 ? 0 : rng.uniform_int(K);
    counts[product_atom(x, a, K)] += 1.0;
  }
  const double bound = 1.0 / compose_smoothness(sigma, K);
  for (std::size_t i = 0; i < N * K; ++i) {
    const double q = counts[i] / n;
    const double ratio = q / joint.probabilities()[i];
    EXPECT_LE(ratio, bound + 4 * std::sqrt(q * (1 - q) / n + 1.0 / n) / joint.probabilities()[i]);
  }
}

ActionTable tiny_table() {
  return {{{0.2, 0.8}, {0.6, 0.3}, {0.5, 0.5}}, {{0.7, 0.1}, {0.2, 0.9}, {0.4, 0.6}}};
}

TEST(ProductClass, Rescaling) {
  const auto cls = make_product_class(tiny_table());
  EXPECT_EQ(cls->num_atoms(), 6u);
  EXPECT_DOUBLE_EQ(cls->at(0, Context::atom(product_atom(1, 1, 2))), 2 * 0.3 - 1);
  EXPECT_DOUBLE_EQ(cls->at(1, Context::atom(product_atom(0, 0, 2))), 2 * 0.7 - 1);
  const auto m = product_measure(DiscreteMeasure({0.5, 0.25, 0.25}), 2);
  EXPECT_DOUBLE_EQ(m.probabilities()[product_atom(1, 0, 2)], 0.125);
}

TEST(Defaults, GammaAndProxy) {
  EXPECT_DOUBLE_EQ(rademacher_proxy(100, 4), std::sqrt(200 * std::log(4.0)));
  EXPECT_DOUBLE_EQ(default_gamma(100, 0.25, 2.0, 8.0), 12 * std::log(100.0) * std::sqrt(100 * 0.25 / 16.0));
  EXPECT_EQ(default_gamma(1, 0.5, 2.0, 1.0), 1.0);
}

std::unique_ptr<IidAdversary> contexts(std::size_t N, double sigma) {
  return std::make_unique<IidAdversary>(
      SmoothnessCertificate(sigma, ContextMeasure::finite_unembedded(DiscreteMeasure::uniform(N))),
      LabelRule::rademacher());
}

TEST(SquareCb, SingleActionHasZeroRegret) {
  const ActionTable table{{{0.3}, {0.6}}, {{0.5}, {0.1}}};
  auto cls = make_product_class(table);
  const auto mu = product_measure(DiscreteMeasure::uniform(2), 1);
  FtplLearner regressor(cls, LossFunction::square(), mu, ftpl_schedule(50, 0.5, 1.0, 1.0, FtplVariant::dual));
  auto adv = contexts(2, 0.5);
  const auto r = run_square_cb(*adv, regressor, table, 0, 5.0, 50, Rng(1));
  EXPECT_EQ(r.reg_cb, 0.0);
  EXPECT_EQ(r.reg_cb_realized, 0.0);
  for (const auto& round : r.rounds) {
    EXPECT_EQ(round.action, 0u);
    EXPECT_EQ(round.distribution, std::vector<double>{1.0});
  }
}

TEST(SquareCb, RoundsAreWellFormedAndRegSqRecomputes) {
  const auto table = tiny_table();
  auto cls = make_product_class(table);
  const std::size_t K = 2, T = 120;
  const auto mu = product_measure(DiscreteMeasure::uniform(3), K);
  RelaxLearner regressor(RelaxMode::general, cls, LossFunction::square(), mu,
                         default_relax_params(T, compose_smoothness(0.5, K), 1.0));
  auto adv = contexts(3, 0.5);
  const auto r = run_square_cb(*adv, regressor, table, 1, 8.0, T, Rng(2));
  ASSERT_EQ(r.rounds.size(), T);
  EXPECT_EQ(r.clamp_warnings, 0u);
  double reg_cb = 0.0;
  for (const auto& round : r.rounds) {
    double total = 0.0;
    for (double p : round.distribution) {
      EXPECT_GT(p, 0.0);
      total += p;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_TRUE(round.loss == 0.0 || round.loss == 1.0);
    const auto& f = table[1][round.context];
    reg_cb += f[round.action] - std::min(f[0], f[1]);
  }
  EXPECT_NEAR(r.reg_cb, reg_cb, 1e-9);
  // Reg_Sq on [0, 1] from the rounds alone.
  double learner = 0.0;
  std::vector<double> experts(table.size(), 0.0);
  for (const auto& round : r.rounds) {
    const double p = round.predictions[round.action];
    learner += (p - round.loss) * (p - round.loss);
    for (std::size_t h = 0; h < table.size(); ++h) {
      const double v = table[h][round.context][round.action];
      experts[h] += (v - round.loss) * (v - round.loss);
    }
  }
  const double reg_sq = learner - *std::min_element(experts.begin(), experts.end());
  EXPECT_NEAR(r.reg_sq, reg_sq, 1e-9);
  EXPECT_EQ(r.oracle_calls, regressor.oracle_calls());
}

TEST(SquareCb, LossesHaveTheComparatorMean) {
  const ActionTable table{{{0.2, 0.7}}};
  auto cls = make_product_class(table);
  const auto mu = product_measure(DiscreteMeasure::uniform(1), 2);
  FtplLearner regressor(cls, LossFunction::square(), mu, ftpl_schedule(4000, 1.0, 1.0, 1.0, FtplVariant::dual));
  auto adv = contexts(1, 1.0);
  const auto r = run_square_cb(*adv, regressor, table, 0, 1.0, 4000, Rng(3));
  std::array<double, 2> sum{0, 0}, n{0, 0};
  for (const auto& round : r.rounds) {
    sum[round.action] += round.loss;
    n[round.action] += 1;
  }
  for (std::size_t a = 0; a < 2; ++a) {
    ASSERT_GT(n[a], 100);
    const double q = table[0][0][a];
    EXPECT_NEAR(sum[a] / n[a], q, 4 * std::sqrt(q * (1 - q) / n[a]));
  }
}

}  // namespace
}  // namespace smoothol
