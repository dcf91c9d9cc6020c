#include "smoothol/oracle.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "smoothol/errors.hpp"

namespace smoothol {

double ErmQuery::total_abs_weight() const {
  double total = 0.0;
  for (const auto& r : rows) total += std::abs(r.weight);
  return total;
}

ErmQuery compact(const ErmQuery& query) {
  using Key = std::tuple<Context, double, LossSelector>;
  std::map<Key, double> merged;
  for (const auto& r : query.rows) {
    const double label = r.loss == LossSelector::identity_loss ? 0.0 : r.label;
    merged[Key{r.context, label, r.loss}] += r.weight;
  }
  ErmQuery out;
  out.rows.reserve(merged.size());
  for (const auto& [key, weight] : merged) {
    if (weight == 0.0) continue;
    out.add(std::get<0>(key), std::get<1>(key), weight, std::get<2>(key));
  }
  return out;
}

void HistoryRows::add(const Context& x, double label) {
  ++observations_;
  auto [it, inserted] = index_.try_emplace({x, label}, rows_.size());
  if (inserted) {
    rows_.push_back({x, label, 1.0, LossSelector::main_loss});
  } else {
    rows_[it->second].weight += 1.0;
  }
}

std::vector<double> erm_objectives(const ErmQuery& query, const HypothesisClass& cls, const LossFunction& loss) {
  const std::size_t n = cls.size();
  std::vector<double> objective(n, 0.0);
  std::vector<double> values(n);
  for (const auto& row : query.rows) {
    if (!cls.accepts(row.context)) throw DomainMismatch();
    cls.evaluate_all(row.context, values);
    if (row.loss == LossSelector::identity_loss) {
      for (std::size_t h = 0; h < n; ++h) objective[h] += row.weight * values[h];
    } else {
      for (std::size_t h = 0; h < n; ++h) objective[h] += row.weight * loss(values[h], row.label);
    }
  }
  return objective;
}

namespace {

std::size_t lowest_argmin(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t h = 1; h < v.size(); ++h) {
    if (v[h] < v[best]) best = h;
  }
  return best;
}

}  // namespace

ErmResult erm_exact(const ErmQuery& query, const HypothesisClass& cls, const LossFunction& loss) {
  const auto objective = erm_objectives(query, cls, loss);
  const std::size_t best = lowest_argmin(objective);
  return {best, objective[best], 1};
}

double slack_budget(const ErmQuery& query, double zeta, SlackConvention convention) {
  return convention == SlackConvention::total_weight ? zeta * query.total_abs_weight() : zeta;
}

ErmResult erm_approximate(const ErmQuery& query, const HypothesisClass& cls, const LossFunction& loss,
                          double zeta, Rng& rng, SlackConvention convention) {
  if (!(zeta >= 0.0)) throw std::invalid_argument("zeta must be nonnegative");
  const auto objective = erm_objectives(query, cls, loss);
  const std::size_t best = lowest_argmin(objective);
  if (zeta == 0.0 || !rng.bernoulli(0.5)) return {best, objective[best], 1};

  const double limit = objective[best] + slack_budget(query, zeta, convention);
  std::vector<std::size_t> admissible;
  for (std::size_t h = 0; h < objective.size(); ++h) {
    if (h != best && objective[h] <= limit) admissible.push_back(h);
  }
  if (admissible.empty()) return {best, objective[best], 1};
  const std::size_t pick = admissible[rng.uniform_int(admissible.size())];
  return {pick, objective[pick], 1};
}

ErmOracle::ErmOracle(ClassPtr cls, LossFunction loss, OracleOptions options)
    : cls_(std::move(cls)), loss_(std::move(loss)), options_(options), rng_(options.seed) {
  if (!cls_) throw std::invalid_argument("oracle needs a hypothesis class");
  if (!(options_.zeta >= 0.0)) throw std::invalid_argument("zeta must be nonnegative");
}

ErmResult ErmOracle::minimize(const ErmQuery& query) {
  ErmResult result = options_.zeta == 0.0 ? erm_exact(query, *cls_, loss_)
                                          : erm_approximate(query, *cls_, loss_, options_.zeta, rng_, options_.slack);
  ++calls_;
  if (log_) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : query.rows) {
      rows.push_back({r.context.to_string(), r.label, r.weight,
                      r.loss == LossSelector::main_loss ? "main" : "identity"});
    }
    nlohmann::json record{{"rows", std::move(rows)},
                          {"result_index", result.hypothesis_index},
                          {"objective", result.objective_value}};
    *log_ << record.dump() << '\n';
  }
  return result;
}

}  // namespace smoothol
