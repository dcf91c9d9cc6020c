#pragma once

#include <stdexcept>
#include <string>

namespace smoothol {

/// A context that the hypothesis class cannot evaluate.
class DomainMismatch : public std::invalid_argument {
 public:
  DomainMismatch() : std::invalid_argument("domain mismatch") {}
};

/// A density ratio exceeded the declared 1/sigma bound.
class SmoothnessViolation : public std::invalid_argument {
 public:
  explicit SmoothnessViolation(const std::string& what = "smoothness violated")
      : std::invalid_argument(what) {}
};

/// Bad or unresolvable experiment configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A runtime invariant failed while an experiment was running (CLI exit code 3).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace smoothol
