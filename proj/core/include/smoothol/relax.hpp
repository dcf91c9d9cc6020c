#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "smoothol/context.hpp"
#include "smoothol/learner.hpp"
#include "smoothol/loss.hpp"
#include "smoothol/oracle.hpp"
#include "smoothol/rng.hpp"

namespace smoothol {

/// Future contexts Z[s][j] ~ mu and Rademacher signs eps[s][j] for
/// s = t+1..T, j = 1..k, stored row-major.
struct PlayoutDraw {
  std::size_t t = 0;
  std::size_t horizon = 0;
  std::size_t k = 0;
  std::vector<Context> points;
  std::vector<std::int8_t> signs;

  std::size_t future_rounds() const { return horizon > t ? horizon - t : 0; }
  /// s in (t, T], j in [0, k).
  const Context& point(std::size_t s, std::size_t j) const { return points[(s - t - 1) * k + j]; }
  int sign(std::size_t s, std::size_t j) const { return signs[(s - t - 1) * k + j]; }
};

PlayoutDraw draw_playout(const ContextMeasure& mu, std::size_t t, std::size_t horizon, std::size_t k, Rng& rng);

/// Identity-loss rows carrying -coefficient * eps[s][j] on Z[s][j], merged by
/// context. Minimizing them realizes sup_f coefficient * sum eps f(Z).
std::vector<WeightedExample> playout_rows(const PlayoutDraw& playout, double coefficient);

struct RelaxParams {
  std::size_t horizon = 1;  // T
  std::size_t k = 1;        // playouts per future round
  double lipschitz = 1.0;   // L
  double delta = 1.0;       // grid scale of the general solver
};

/// k = ceil((3 / sigma) log T) (at least 1), delta = 1 / (L sqrt(T)).
RelaxParams default_relax_params(std::size_t horizon, double sigma, double lipschitz);

/// Observed history and parameters of one relaxation trajectory.
class RelaxState {
 public:
  explicit RelaxState(RelaxParams params);

  void record(const Context& x, double y) { history_.add(x, y); }
  const HistoryRows& history() const { return history_; }
  /// Number of completed rounds.
  std::size_t rounds() const { return history_.observations(); }
  const RelaxParams& params() const { return params_; }

 private:
  RelaxParams params_;
  HistoryRows history_;
};

/// a(y) = sup_f [6L sum eps f(Z) - L_{t-1}(f) - l(f(x_t), y)], one oracle call.
double relaxation_value(const RelaxState& state, const std::vector<WeightedExample>& playout,
                        const Context& x_t, double y, ErmOracle& oracle);

struct LinearSolution {
  double a_plus = 0.0;
  double a_minus = 0.0;
  double prediction = 0.0;
};

/// Closed-form min-max for the linear loss (1 - yhat y) / 2 with two oracle
/// calls. The two branches (1 - yhat)/2 + a_plus and (1 + yhat)/2 + a_minus
/// cross at yhat = a_plus - a_minus, which lies in [-1, 1].
/// Throws std::invalid_argument("linear loss required").
LinearSolution solve_linear(const RelaxState& state, const std::vector<WeightedExample>& playout,
                            const Context& x_t, ErmOracle& oracle);
double predict_linear(const RelaxState& state, const PlayoutDraw& playout, const Context& x_t, ErmOracle& oracle);

struct ThreePointResult {
  std::size_t index = 0;
  std::size_t evaluations = 0;
};

/// Exact minimizer over indices 0..n-1 of a function convex along the index,
/// lowest index on ties, with at most 3 ceil(log2 n) + 3 distinct evaluations.
/// Throws std::invalid_argument on n == 0.
ThreePointResult three_point_min(const std::function<double(std::size_t)>& value, std::size_t n);

/// Uniform grid on [-1, 1] with spacing at most delta: ceil(2 / delta) + 1 points.
std::vector<double> prediction_grid(double delta);

/// Worst-case oracle calls of one solve_general round on a grid of m points.
std::uint64_t general_call_budget(std::size_t m);

struct GeneralSolution {
  double prediction = 0.0;
  std::size_t grid_index = 0;
  std::size_t evaluations = 0;
  std::uint64_t oracle_calls = 0;
};

/// argmin over the grid of V(yhat) = max_{y in grid} l(yhat, y) + a(y), outer
/// min by three-point search; each evaluation of V rescans the inner sup with
/// one oracle call per grid point.
GeneralSolution solve_general(const RelaxState& state, const std::vector<WeightedExample>& playout,
                              const Context& x_t, const LossFunction& loss, ErmOracle& oracle);
double predict_general(const RelaxState& state, const PlayoutDraw& playout, const Context& x_t,
                       const LossFunction& loss, ErmOracle& oracle);

struct RelaxationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of E[sup_f 2L sum eps f(Z) - L_t(f)] + (T - t)^3 e^{-sigma k}
/// over `num_playouts` fresh playouts (one oracle call each).
RelaxationEstimate estimate_relaxation(const RelaxState& state, const ContextMeasure& mu, double sigma,
                                       std::size_t num_playouts, ErmOracle& oracle, Rng& rng);

enum class RelaxMode { linear, general };

/// Improper learner: a fresh playout per round, then the linear closed form
/// or the general grid solver.
class RelaxLearner final : public OnlineLearner {
 public:
  RelaxLearner(RelaxMode mode, ClassPtr cls, LossFunction loss, ContextMeasure mu, RelaxParams params,
               OracleOptions oracle_options = {});

  void begin_round(std::size_t t, Rng& rng) override;
  double predict(const Context& x) override;
  void observe(const Context& x, double y) override;
  std::uint64_t oracle_calls() const override { return oracle_.call_count(); }
  std::string name() const override { return mode_ == RelaxMode::linear ? "relax-linear" : "relax-general"; }

  const RelaxState& state() const { return state_; }
  const PlayoutDraw& playout() const { return playout_; }
  const std::optional<LinearSolution>& last_linear() const { return last_linear_; }
  ErmOracle& oracle() { return oracle_; }

 private:
  RelaxMode mode_;
  LossFunction loss_;
  ContextMeasure mu_;
  RelaxState state_;
  ErmOracle oracle_;
  PlayoutDraw playout_;
  std::vector<WeightedExample> rows_;
  std::optional<LinearSolution> last_linear_;
};

}  // namespace smoothol
