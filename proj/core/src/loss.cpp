#include "smoothol/loss.hpp"

#include <stdexcept>

namespace smoothol {

LossFunction LossFunction::absolute() { return {LossKind::absolute, "absolute", 0.5, 0.0, 1.0}; }
LossFunction LossFunction::linear() { return {LossKind::linear, "linear", 0.5, 0.0, 1.0}; }
LossFunction LossFunction::square() { return {LossKind::square, "square", 1.0, 0.0, 1.0}; }

LossFunction LossFunction::custom(std::string name, Fn fn, double lipschitz, double lo, double hi) {
  if (!fn) throw std::invalid_argument("custom loss needs a callable");
  if (!(lipschitz > 0.0)) throw std::invalid_argument("Lipschitz constant must be positive");
  if (!(lo <= hi)) throw std::invalid_argument("empty loss range");
  return {LossKind::custom, std::move(name), lipschitz, lo, hi, std::move(fn)};
}

LossFunction LossFunction::by_name(const std::string& name) {
  if (name == "absolute") return absolute();
  if (name == "linear") return linear();
  if (name == "square") return square();
  throw std::invalid_argument("unknown loss '" + name + "' (valid: absolute, linear, square)");
}

}  // namespace smoothol
