#include "smoothol/relax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "smoothol/errors.hpp"

namespace smoothol {

PlayoutDraw draw_playout(const ContextMeasure& mu, std::size_t t, std::size_t horizon, std::size_t k, Rng& rng) {
  PlayoutDraw d;
  d.t = t;
  d.horizon = horizon;
  d.k = k;
  const std::size_t total = d.future_rounds() * k;
  d.points.reserve(total);
  d.signs.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    d.points.push_back(mu.sample(rng));
    d.signs.push_back(static_cast<std::int8_t>(rng.rademacher()));
  }
  return d;
}

std::vector<WeightedExample> playout_rows(const PlayoutDraw& playout, double coefficient) {
  // Atom contexts merge through a dense index; bare coordinates through a map.
  std::vector<double> by_id;
  std::vector<const Context*> first_seen;
  std::map<Context, double> by_point;
  for (std::size_t i = 0; i < playout.points.size(); ++i) {
    const Context& z = playout.points[i];
    const double w = -coefficient * playout.signs[i];
    if (z.has_id()) {
      const std::size_t id = z.id();
      if (id >= by_id.size()) {
        by_id.resize(id + 1, 0.0);
        first_seen.resize(id + 1, nullptr);
      }
      by_id[id] += w;
      if (!first_seen[id]) first_seen[id] = &z;
    } else {
      by_point[z] += w;
    }
  }
  std::vector<WeightedExample> rows;
  for (std::size_t id = 0; id < by_id.size(); ++id) {
    if (first_seen[id] && by_id[id] != 0.0) {
      rows.push_back({*first_seen[id], 0.0, by_id[id], LossSelector::identity_loss});
    }
  }
  for (const auto& [z, w] : by_point) {
    if (w != 0.0) rows.push_back({z, 0.0, w, LossSelector::identity_loss});
  }
  return rows;
}

RelaxParams default_relax_params(std::size_t horizon, double sigma, double lipschitz) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must lie in (0, 1]");
  if (!(lipschitz > 0.0)) throw std::invalid_argument("lipschitz constant must be positive");
  const double T = static_cast<double>(horizon);
  RelaxParams p;
  p.horizon = horizon;
  p.k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(3.0 / sigma * std::log(T))));
  p.lipschitz = lipschitz;
  p.delta = 1.0 / (lipschitz * std::sqrt(T));
  return p;
}

RelaxState::RelaxState(RelaxParams params) : params_(params) {
  if (params_.k == 0) throw std::invalid_argument("k must be >= 1");
  if (!(params_.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(params_.lipschitz > 0.0)) throw std::invalid_argument("lipschitz constant must be positive");
}

namespace {

ErmQuery base_query(const RelaxState& state, const std::vector<WeightedExample>& playout, const Context& x_t) {
  ErmQuery q;
  const auto& hist = state.history().rows();
  q.rows.reserve(hist.size() + playout.size() + 1);
  q.rows.insert(q.rows.end(), hist.begin(), hist.end());
  q.rows.insert(q.rows.end(), playout.begin(), playout.end());
  q.rows.push_back({x_t, 0.0, 1.0, LossSelector::main_loss});
  return q;
}

}  // namespace

double relaxation_value(const RelaxState& state, const std::vector<WeightedExample>& playout,
                        const Context& x_t, double y, ErmOracle& oracle) {
  ErmQuery q = base_query(state, playout, x_t);
  q.rows.back().label = y;
  return -oracle.minimize(q).objective_value;
}

LinearSolution solve_linear(const RelaxState& state, const std::vector<WeightedExample>& playout,
                            const Context& x_t, ErmOracle& oracle) {
  if (oracle.loss().kind() != LossKind::linear) throw std::invalid_argument("linear loss required");
  ErmQuery q = base_query(state, playout, x_t);
  LinearSolution s;
  q.rows.back().label = 1.0;
  s.a_plus = -oracle.minimize(q).objective_value;
  q.rows.back().label = -1.0;
  s.a_minus = -oracle.minimize(q).objective_value;
  s.prediction = std::clamp(s.a_plus - s.a_minus, -1.0, 1.0);
  return s;
}

double predict_linear(const RelaxState& state, const PlayoutDraw& playout, const Context& x_t, ErmOracle& oracle) {
  const double coefficient = 6.0 * state.params().lipschitz;
  return solve_linear(state, playout_rows(playout, coefficient), x_t, oracle).prediction;
}

ThreePointResult three_point_min(const std::function<double(std::size_t)>& value, std::size_t n) {
  if (n == 0) throw std::invalid_argument("empty grid");
  std::unordered_map<std::size_t, double> memo;
  auto f = [&](std::size_t i) {
    auto it = memo.find(i);
    if (it != memo.end()) return it->second;
    const double v = value(i);
    memo.emplace(i, v);
    return v;
  };

  std::size_t lo = 0;
  std::size_t hi = n - 1;
  while (hi - lo + 1 > 3) {
    const std::size_t w = hi - lo;
    const std::size_t z1 = lo + w / 4;
    const std::size_t z2 = lo + w / 2;
    const std::size_t z3 = lo + (3 * w) / 4;
    const double f1 = f(z1);
    const double f2 = f(z2);
    if (f1 <= f2) {
      // Everything right of z2 is >= f2 >= f1, and z1 < z2 is a candidate.
      hi = z2 - 1;
      continue;
    }
    const double f3 = f(z3);
    if (f3 < f2) {
      lo = z2 + 1;
    } else {
      // f1 > f2 <= f3: the minimum sits strictly between z1 and z3, and when
      // f3 == f2 the point z2 beats z3 on index.
      lo = z1 + 1;
      hi = z3 - 1;
    }
  }
  std::size_t best = lo;
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    if (f(i) < f(best)) best = i;
  }
  return {best, memo.size()};
}

std::vector<double> prediction_grid(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const auto intervals = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 / delta - 1e-9)));
  std::vector<double> grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    grid[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(intervals);
  }
  grid.back() = 1.0;
  return grid;
}

std::uint64_t general_call_budget(std::size_t m) {
  const auto log2m = static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(m, 1)))));
  return m + 3 * log2m * m;
}

GeneralSolution solve_general(const RelaxState& state, const std::vector<WeightedExample>& playout,
                              const Context& x_t, const LossFunction& loss, ErmOracle& oracle) {
  const auto grid = prediction_grid(state.params().delta);
  const std::uint64_t calls_before = oracle.call_count();
  ErmQuery q = base_query(state, playout, x_t);

  auto value = [&](std::size_t i) {
    double worst = -std::numeric_limits<double>::infinity();
    for (double y : grid) {
      q.rows.back().label = y;
      const double a = -oracle.minimize(q).objective_value;
      worst = std::max(worst, loss(grid[i], y) + a);
    }
    return worst;
  };
  const auto r = three_point_min(value, grid.size());
  return {grid[r.index], r.index, r.evaluations, oracle.call_count() - calls_before};
}

double predict_general(const RelaxState& state, const PlayoutDraw& playout, const Context& x_t,
                       const LossFunction& loss, ErmOracle& oracle) {
  const double coefficient = 6.0 * state.params().lipschitz;
  return solve_general(state, playout_rows(playout, coefficient), x_t, loss, oracle).prediction;
}

RelaxationEstimate estimate_relaxation(const RelaxState& state, const ContextMeasure& mu, double sigma,
                                       std::size_t num_playouts, ErmOracle& oracle, Rng& rng) {
  if (num_playouts < 2) throw std::invalid_argument("num_playouts must be >= 2");
  const auto& params = state.params();
  const std::size_t t = state.rounds();
  const double remaining = params.horizon > t ? static_cast<double>(params.horizon - t) : 0.0;
  const double tail = remaining * remaining * remaining * std::exp(-sigma * static_cast<double>(params.k));

  std::vector<double> values;
  values.reserve(num_playouts);
  for (std::size_t i = 0; i < num_playouts; ++i) {
    const auto playout = draw_playout(mu, t, params.horizon, params.k, rng);
    ErmQuery q;
    q.rows = state.history().rows();
    const auto rows = playout_rows(playout, 2.0 * params.lipschitz);
    q.rows.insert(q.rows.end(), rows.begin(), rows.end());
    values.push_back(-oracle.minimize(q).objective_value);
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return {mean + tail, sd / std::sqrt(static_cast<double>(values.size()))};
}

RelaxLearner::RelaxLearner(RelaxMode mode, ClassPtr cls, LossFunction loss, ContextMeasure mu, RelaxParams params,
                           OracleOptions oracle_options)
    : mode_(mode),
      loss_(loss),
      mu_(std::move(mu)),
      state_(params),
      oracle_(std::move(cls), std::move(loss), oracle_options) {
  if (mode_ == RelaxMode::linear && loss_.kind() != LossKind::linear) {
    throw std::invalid_argument("linear loss required");
  }
}

void RelaxLearner::begin_round(std::size_t t, Rng& rng) {
  const auto& p = state_.params();
  playout_ = draw_playout(mu_, t, p.horizon, p.k, rng);
  rows_ = playout_rows(playout_, 6.0 * p.lipschitz);
}

double RelaxLearner::predict(const Context& x) {
  double yhat = 0.0;
  if (mode_ == RelaxMode::linear) {
    last_linear_ = solve_linear(state_, rows_, x, oracle_);
    if (std::abs(last_linear_->a_plus - last_linear_->a_minus) > 1.0 + 1e-9) {
      throw InvariantViolation("|a_plus - a_minus| exceeds 1");
    }
    yhat = last_linear_->prediction;
  } else {
    yhat = solve_general(state_, rows_, x, loss_, oracle_).prediction;
  }
  if (!(yhat >= -1.0 && yhat <= 1.0)) throw InvariantViolation("prediction outside [-1, 1]");
  return yhat;
}

void RelaxLearner::observe(const Context& x, double y) { state_.record(x, y); }

}  // namespace smoothol
