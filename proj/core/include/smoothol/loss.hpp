#pragma once

#include <functional>
#include <string>
#include <utility>

namespace smoothol {

enum class LossKind { absolute, linear, square, custom };

/// A convex, L-Lipschitz loss on [-1, 1] x [-1, 1].
///
///   absolute: |yhat - y| / 2        range [0, 1], L = 1/2
///   linear:   (1 - yhat * y) / 2    range [0, 1] on [-1,1]^2, L = 1/2
///   square:   (yhat - y)^2 / 4      range [0, 1], L = 1
///
/// The square loss equals (p - q)^2 for p = (yhat+1)/2, q = (y+1)/2, i.e. the
/// usual square loss on [0, 1].
class LossFunction {
 public:
  using Fn = std::function<double(double, double)>;

  static LossFunction absolute();
  static LossFunction linear();
  static LossFunction square();
  /// `fn` must be convex in its first argument and `lipschitz`-Lipschitz.
  static LossFunction custom(std::string name, Fn fn, double lipschitz, double lo, double hi);

  /// Looks up "absolute", "linear" or "square"; throws std::invalid_argument.
  static LossFunction by_name(const std::string& name);

  double operator()(double yhat, double y) const {
    switch (kind_) {
      case LossKind::absolute: return (yhat > y ? yhat - y : y - yhat) * 0.5;
      case LossKind::linear: return (1.0 - yhat * y) * 0.5;
      case LossKind::square: return (yhat - y) * (yhat - y) * 0.25;
      case LossKind::custom: break;
    }
    return fn_(yhat, y);
  }

  LossKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double lipschitz() const { return lipschitz_; }
  /// Declared value range of the loss.
  std::pair<double, double> range() const { return {lo_, hi_}; }

 private:
  LossFunction(LossKind kind, std::string name, double lipschitz, double lo, double hi, Fn fn = {})
      : kind_(kind), name_(std::move(name)), lipschitz_(lipschitz), lo_(lo), hi_(hi), fn_(std::move(fn)) {}

  LossKind kind_;
  std::string name_;
  double lipschitz_;
  double lo_;
  double hi_;
  Fn fn_;
};

}  // namespace smoothol
