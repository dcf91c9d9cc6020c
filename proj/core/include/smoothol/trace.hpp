#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "smoothol/context.hpp"
#include "smoothol/hypothesis.hpp"
#include "smoothol/loss.hpp"

namespace smoothol {

struct RoundRecord {
  std::size_t t = 0;  // 1-based
  Context context;
  double label = 0.0;
  double prediction = 0.0;
  std::optional<std::size_t> hypothesis_index;  // proper learners only
  double instant_loss = 0.0;
  std::uint64_t oracle_calls_so_far = 0;
  /// Regret of the prefix 1..t against the best hypothesis on that prefix;
  /// filled by finalize_regret.
  std::optional<double> cumulative_regret;
};

/// Per-round record of one trajectory. Single writer.
struct RegretTrace {
  std::vector<RoundRecord> rounds;
  std::optional<double> cumulative_regret;
  std::optional<std::size_t> comparator_index;
  std::optional<double> comparator_loss;

  double learner_loss() const;
};

/// Sum of learner losses minus the exhaustive minimum over `cls`, for the
/// full trace and for every prefix. Throws std::invalid_argument("empty trace").
RegretTrace finalize_regret(RegretTrace trace, const HypothesisClass& cls, const LossFunction& loss);

}  // namespace smoothol
