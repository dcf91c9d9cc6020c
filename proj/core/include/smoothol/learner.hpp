#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "smoothol/context.hpp"
#include "smoothol/rng.hpp"

namespace smoothol {

/// Round protocol, in order: begin_round (proper learners commit to f_t
/// here, before the context is drawn), predict, observe.
class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  /// `t` is 1-based. `rng` is this round's private stream.
  virtual void begin_round(std::size_t t, Rng& rng) = 0;
  virtual double predict(const Context& x) = 0;
  virtual void observe(const Context& x, double y) = 0;

  /// The hypothesis committed in begin_round, for proper learners.
  virtual std::optional<std::size_t> committed_hypothesis() const { return std::nullopt; }
  virtual std::uint64_t oracle_calls() const = 0;
  virtual std::string name() const = 0;
};

}  // namespace smoothol
