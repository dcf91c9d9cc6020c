#include "smoothol/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smoothol/errors.hpp"
#include "smoothol/loss.hpp"

namespace smoothol {

std::vector<double> igw_distribution(std::span<const double> predictions, double gamma) {
  const std::size_t K = predictions.size();
  if (K == 0) throw std::invalid_argument("no actions");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  std::vector<double> p(K, 0.0);
  const auto best = static_cast<std::size_t>(std::min_element(predictions.begin(), predictions.end()) -
                                             predictions.begin());
  double rest = 0.0;
  for (std::size_t a = 0; a < K; ++a) {
    if (a == best) continue;
    p[a] = 1.0 / (static_cast<double>(K) + gamma * (predictions[a] - predictions[best]));
    rest += p[a];
  }
  p[best] = 1.0 - rest;
  if (!(p[best] > 0.0)) throw InvariantViolation("inverse gap weighting left negative mass");
  return p;
}

double compose_smoothness(double sigma_context, std::size_t num_actions) {
  if (!(sigma_context > 0.0 && sigma_context <= 1.0)) throw std::invalid_argument("sigma must lie in (0, 1]");
  if (num_actions == 0) throw std::invalid_argument("need at least one action");
  return sigma_context / static_cast<double>(num_actions);
}

std::shared_ptr<TableClass> make_product_class(const ActionTable& table) {
  if (table.empty() || table[0].empty() || table[0][0].empty()) throw std::invalid_argument("empty action table");
  const std::size_t X = table[0].size();
  const std::size_t K = table[0][0].size();
  std::vector<std::vector<double>> values;
  values.reserve(table.size());
  for (const auto& f : table) {
    if (f.size() != X) throw std::invalid_argument("ragged action table");
    std::vector<double> row(X * K);
    for (std::size_t x = 0; x < X; ++x) {
      if (f[x].size() != K) throw std::invalid_argument("ragged action table");
      for (std::size_t a = 0; a < K; ++a) {
        const double v = f[x][a];
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("action table values must lie in [0, 1]");
        row[product_atom(x, a, K)] = 2.0 * v - 1.0;
      }
    }
    values.push_back(std::move(row));
  }
  return std::make_shared<TableClass>(std::move(values));
}

ContextMeasure product_measure(const DiscreteMeasure& mu, std::size_t num_actions) {
  if (num_actions == 0) throw std::invalid_argument("need at least one action");
  std::vector<double> w(mu.size() * num_actions);
  for (std::size_t x = 0; x < mu.size(); ++x) {
    for (std::size_t a = 0; a < num_actions; ++a) w[product_atom(x, a, num_actions)] = mu[x];
  }
  return ContextMeasure::finite_unembedded(DiscreteMeasure::from_weights(w));
}

ActionTable random_action_table(std::size_t num_hypotheses, std::size_t num_contexts, std::size_t num_actions,
                                double lo, double hi, Rng& rng) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw std::invalid_argument("table range must lie in [0, 1]");
  ActionTable t(num_hypotheses, std::vector<std::vector<double>>(num_contexts, std::vector<double>(num_actions)));
  for (auto& f : t) {
    for (auto& row : f) {
      for (double& v : row) v = lo + (hi - lo) * rng.uniform();
    }
  }
  return t;
}

double rademacher_proxy(std::size_t horizon, std::size_t num_hypotheses) {
  const double F = static_cast<double>(std::max<std::size_t>(num_hypotheses, 2));
  return std::sqrt(2.0 * static_cast<double>(horizon) * std::log(F));
}

double default_gamma(std::size_t horizon, double sigma, double lipschitz, double rademacher) {
  const double T = static_cast<double>(horizon);
  const double g = 12.0 * std::log(T) * std::sqrt(T * sigma / (lipschitz * rademacher));
  // log(1) = 0; keep gamma positive for the degenerate horizon.
  return g > 0.0 ? g : 1.0;
}

namespace {

std::size_t sample_index(std::span<const double> p, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

}  // namespace

BanditResult run_square_cb(SmoothAdversary& contexts, OnlineLearner& regressor, const ActionTable& table,
                           std::size_t comparator, double gamma, std::size_t horizon, const Rng& rng) {
  if (comparator >= table.size()) throw std::out_of_range("comparator index out of range");
  const auto& fstar = table[comparator];
  const std::size_t K = fstar.at(0).size();
  const auto square = LossFunction::square();

  const Rng adv_stream = rng.split(1);
  const Rng learner_stream = rng.split(2);
  const Rng action_stream = rng.split(3);
  const Rng loss_stream = rng.split(4);

  BanditResult out;
  out.gamma = gamma;
  out.rounds.reserve(horizon);
  std::vector<double> internal(K);
  for (std::size_t t = 1; t <= horizon; ++t) {
    Rng adv_rng = adv_stream.split(t);
    Rng learner_rng = learner_stream.split(t);
    Rng action_rng = action_stream.split(t);
    Rng loss_rng = loss_stream.split(t);

    regressor.begin_round(t, learner_rng);
    const auto round = contexts.next_round(std::nullopt, adv_rng);
    const std::size_t x = round.context.id();
    if (x >= fstar.size()) throw std::out_of_range("context outside the action table");

    BanditRound br;
    br.t = t;
    br.context = x;
    br.predictions.resize(K);
    for (std::size_t a = 0; a < K; ++a) {
      double yhat = regressor.predict(Context::atom(product_atom(x, a, K)));
      if (yhat < -1.0 || yhat > 1.0) {
        ++out.clamp_warnings;
        yhat = std::clamp(yhat, -1.0, 1.0);
      }
      internal[a] = yhat;
      br.predictions[a] = (yhat + 1.0) / 2.0;
    }
    br.distribution = igw_distribution(br.predictions, gamma);
    br.action = sample_index(br.distribution, action_rng.uniform());

    std::vector<double> losses(K);
    for (std::size_t a = 0; a < K; ++a) losses[a] = loss_rng.bernoulli(fstar[x][a]) ? 1.0 : 0.0;
    br.loss = losses[br.action];

    const auto best = static_cast<std::size_t>(std::min_element(fstar[x].begin(), fstar[x].end()) - fstar[x].begin());
    out.reg_cb += fstar[x][br.action] - fstar[x][best];
    out.reg_cb_realized += losses[br.action] - losses[best];

    const Context pair = Context::atom(product_atom(x, br.action, K));
    const double label = 2.0 * br.loss - 1.0;
    RoundRecord rec;
    rec.t = t;
    rec.context = pair;
    rec.label = label;
    rec.prediction = internal[br.action];
    rec.instant_loss = square(internal[br.action], label);
    rec.oracle_calls_so_far = regressor.oracle_calls();
    out.square_trace.rounds.push_back(rec);

    regressor.observe(pair, label);
    out.rounds.push_back(std::move(br));
  }
  out.oracle_calls = regressor.oracle_calls();
  if (horizon > 0) {
    const auto cls = make_product_class(table);
    out.square_trace = finalize_regret(std::move(out.square_trace), *cls, square);
    out.reg_sq = *out.square_trace.cumulative_regret;
  }
  return out;
}

}  // namespace smoothol
