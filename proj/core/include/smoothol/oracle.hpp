#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "smoothol/context.hpp"
#include "smoothol/hypothesis.hpp"
#include "smoothol/loss.hpp"
#include "smoothol/rng.hpp"

namespace smoothol {

/// main_loss applies the problem's loss; identity_loss scores a row by the
/// prediction itself, l_Id(yhat, y) = yhat.
enum class LossSelector : std::uint8_t { main_loss, identity_loss };

struct WeightedExample {
  Context context;
  double label = 0.0;
  double weight = 0.0;  // any real, negative allowed
  LossSelector loss = LossSelector::main_loss;
};

struct ErmQuery {
  std::vector<WeightedExample> rows;

  void add(Context x, double label, double weight, LossSelector loss) {
    rows.push_back({std::move(x), label, weight, loss});
  }
  double total_abs_weight() const;
};

/// Merges rows with equal (context, label, selector) by summing weights.
/// Identity rows ignore their label. The objective of every hypothesis is
/// unchanged up to rounding; the total absolute weight can only shrink.
ErmQuery compact(const ErmQuery& query);

/// Unit-weight main-loss rows for an observed history, merged incrementally by
/// (context, label) so the row count stays bounded by the distinct pairs seen.
class HistoryRows {
 public:
  void add(const Context& x, double label);
  const std::vector<WeightedExample>& rows() const { return rows_; }
  std::size_t observations() const { return observations_; }

 private:
  std::vector<WeightedExample> rows_;
  std::map<std::pair<Context, double>, std::size_t> index_;
  std::size_t observations_ = 0;
};

struct ErmResult {
  std::size_t hypothesis_index = 0;
  double objective_value = 0.0;
  std::uint64_t calls_consumed = 1;
};

/// sum_i w_i l_i(f_h(x_i), y_i) for every h, accumulated in row order.
/// Throws DomainMismatch if a row's context is outside the class domain.
std::vector<double> erm_objectives(const ErmQuery& query, const HypothesisClass& cls, const LossFunction& loss);

/// Exact weighted ERM by exhaustive scan; ties go to the lowest index and an
/// empty query returns hypothesis 0.
ErmResult erm_exact(const ErmQuery& query, const HypothesisClass& cls, const LossFunction& loss);

/// How the approximation slack scales. total_weight: zeta * sum|w_i| (the
/// usual approximate-oracle guarantee); absolute: zeta alone, the convention
/// used by the FTPL selection rule.
enum class SlackConvention { total_weight, absolute };

double slack_budget(const ErmQuery& query, double zeta, SlackConvention convention);

/// Returns the exact minimizer, or with probability 1/2 a uniformly chosen
/// other hypothesis whose objective is within the slack budget of the minimum.
ErmResult erm_approximate(const ErmQuery& query, const HypothesisClass& cls, const LossFunction& loss,
                          double zeta, Rng& rng, SlackConvention convention = SlackConvention::total_weight);

struct OracleOptions {
  double zeta = 0.0;
  SlackConvention slack = SlackConvention::total_weight;
  std::uint64_t seed = 0;  // randomness for the approximate variant
};

/// Oracle handle: a class, a loss, an accuracy and a call counter. Each
/// handle is single-threaded.
class ErmOracle {
 public:
  ErmOracle(ClassPtr cls, LossFunction loss, OracleOptions options = {});

  ErmResult minimize(const ErmQuery& query);

  std::uint64_t call_count() const { return calls_; }
  const HypothesisClass& hypothesis_class() const { return *cls_; }
  const ClassPtr& class_ptr() const { return cls_; }
  const LossFunction& loss() const { return loss_; }
  const OracleOptions& options() const { return options_; }

  /// Line-delimited JSON record per query: {rows, result_index, objective}.
  /// Pass nullptr to stop logging. The stream must outlive the oracle.
  void attach_log(std::ostream* log) { log_ = log; }

 private:
  ClassPtr cls_;
  LossFunction loss_;
  OracleOptions options_;
  Rng rng_;
  std::uint64_t calls_ = 0;
  std::ostream* log_ = nullptr;
};

}  // namespace smoothol
