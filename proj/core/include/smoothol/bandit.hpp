#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "smoothol/adversary.hpp"
#include "smoothol/context.hpp"
#include "smoothol/hypothesis.hpp"
#include "smoothol/learner.hpp"
#include "smoothol/rng.hpp"
#include "smoothol/trace.hpp"

namespace smoothol {

/// Inverse gap weighting: a* = argmin predictions (lowest index on ties),
/// p(a) = 1 / (K + gamma (yhat(a) - yhat(a*))) for a != a*, and a* takes the
/// rest. K = 1 gives the point mass.
std::vector<double> igw_distribution(std::span<const double> predictions, double gamma);

/// Context-action pairs are sigma / K smooth against mu x Unif([K]).
double compose_smoothness(double sigma_context, std::size_t num_actions);

/// F : X x [K] -> [0, 1] given as values[h][x][a].
using ActionTable = std::vector<std::vector<std::vector<double>>>;

inline std::size_t product_atom(std::size_t x, std::size_t a, std::size_t num_actions) { return x * num_actions + a; }

/// The same class on the product ground set (atom x K + a), rescaled to
/// [-1, 1] by v -> 2v - 1 so that the square loss (yhat - y)^2 / 4 equals
/// the [0, 1] square loss.
std::shared_ptr<TableClass> make_product_class(const ActionTable& table);

/// mu x Unif([K]) on the product ground set.
ContextMeasure product_measure(const DiscreteMeasure& mu, std::size_t num_actions);

/// Random table with entries uniform on [lo, hi].
ActionTable random_action_table(std::size_t num_hypotheses, std::size_t num_contexts, std::size_t num_actions,
                                double lo, double hi, Rng& rng);

/// sqrt(2 T log |F|), the finite-class bound used in place of the unknown
/// sequential Rademacher complexity.
double rademacher_proxy(std::size_t horizon, std::size_t num_hypotheses);

/// gamma = 12 log(T) sqrt(T sigma / (L R)).
double default_gamma(std::size_t horizon, double sigma, double lipschitz, double rademacher);

struct BanditRound {
  std::size_t t = 0;
  std::size_t context = 0;
  std::vector<double> predictions;   // regressor output on [0, 1], per action
  std::vector<double> distribution;  // igw_distribution(predictions, gamma)
  std::size_t action = 0;
  double loss = 0.0;                 // observed l_t(a_t) in {0, 1}
};

struct BanditResult {
  std::vector<BanditRound> rounds;
  /// Square-loss trace of the regressor on the product class (internal scale).
  RegretTrace square_trace;
  double gamma = 0.0;
  /// sum_t f*(x_t, a_t) - min_a f*(x_t, a).
  double reg_cb = 0.0;
  /// sum_t l_t(a_t) - l_t(pi_{f*}(x_t)) with the counterfactual losses drawn.
  double reg_cb_realized = 0.0;
  /// Square-loss regret of the regressor on [0, 1].
  double reg_sq = 0.0;
  std::size_t clamp_warnings = 0;
  std::uint64_t oracle_calls = 0;
};

/// SquareCB over `regressor`, which must be an online learner on
/// make_product_class(table) with square loss. Contexts come from
/// `contexts` (its labels are ignored) and must be atom ids; the loss of
/// action a is Bernoulli(table[comparator][x][a]).
/// Streams: contexts split(1), regressor split(2), actions split(3), losses
/// split(4), each split again by round.
BanditResult run_square_cb(SmoothAdversary& contexts, OnlineLearner& regressor, const ActionTable& table,
                           std::size_t comparator, double gamma, std::size_t horizon, const Rng& rng);

}  // namespace smoothol
