#include "smoothol/trace.hpp"

#include <stdexcept>

#include "smoothol/errors.hpp"

namespace smoothol {

double RegretTrace::learner_loss() const {
  double total = 0.0;
  for (const auto& r : rounds) total += r.instant_loss;
  return total;
}

RegretTrace finalize_regret(RegretTrace trace, const HypothesisClass& cls, const LossFunction& loss) {
  if (trace.rounds.empty()) throw std::invalid_argument("empty trace");
  const std::size_t n = cls.size();
  std::vector<double> running(n, 0.0);
  std::vector<double> values(n);
  double learner = 0.0;
  std::size_t best = 0;
  for (auto& r : trace.rounds) {
    if (!cls.accepts(r.context)) throw DomainMismatch();
    cls.evaluate_all(r.context, values);
    for (std::size_t h = 0; h < n; ++h) running[h] += loss(values[h], r.label);
    learner += r.instant_loss;
    best = 0;
    for (std::size_t h = 1; h < n; ++h) {
      if (running[h] < running[best]) best = h;
    }
    r.cumulative_regret = learner - running[best];
  }
  trace.comparator_index = best;
  trace.comparator_loss = running[best];
  trace.cumulative_regret = learner - running[best];
  return trace;
}

}  // namespace smoothol
