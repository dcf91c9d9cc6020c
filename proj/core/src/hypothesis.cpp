#include "smoothol/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smoothol/errors.hpp"

namespace smoothol {

void HypothesisClass::evaluate_all(const Context& x, std::span<double> out) const {
  for (std::size_t h = 0; h < size(); ++h) out[h] = evaluate(h, x);
}

double HypothesisClass::at(std::size_t h, const Context& x) const {
  if (h >= size()) throw std::out_of_range("hypothesis index out of range");
  if (!accepts(x)) throw DomainMismatch();
  return evaluate(h, x);
}

ThresholdClass::ThresholdClass(std::vector<double> thresholds) : thresholds_(std::move(thresholds)) {
  if (thresholds_.empty()) throw std::invalid_argument("threshold class needs at least one threshold");
  if (!std::is_sorted(thresholds_.begin(), thresholds_.end())) {
    throw std::invalid_argument("thresholds must be ascending");
  }
}

ThresholdClass ThresholdClass::grid(std::size_t m) {
  if (m < 2) throw std::invalid_argument("threshold grid needs m >= 2");
  std::vector<double> t(m);
  for (std::size_t i = 0; i < m; ++i) t[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  return ThresholdClass(std::move(t));
}

ThresholdClass ThresholdClass::fitted(std::span<const double> points) {
  std::vector<double> xs(points.begin(), points.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<double> t{0.0};
  for (std::size_t i = 1; i < xs.size(); ++i) {
    // The midpoint of two distinct dyadics is itself exactly representable
    // far beyond the depths we generate.
    t.push_back(xs[i - 1] + (xs[i] - xs[i - 1]) / 2.0);
  }
  t.push_back(2.0);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return ThresholdClass(std::move(t));
}

double ThresholdClass::evaluate(std::size_t h, const Context& x) const {
  return x.coordinate() >= thresholds_[h] ? 1.0 : -1.0;
}

void ThresholdClass::evaluate_all(const Context& x, std::span<double> out) const {
  const double c = x.coordinate();
  // Thresholds are ascending: +1 up to the first theta > c, -1 afterwards.
  const auto split = static_cast<std::size_t>(
      std::upper_bound(thresholds_.begin(), thresholds_.end(), c) - thresholds_.begin());
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(split), 1.0);
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(split), out.begin() + static_cast<std::ptrdiff_t>(size()), -1.0);
}

TableClass::TableClass(std::vector<std::vector<double>> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("table class needs at least one hypothesis");
  num_atoms_ = values_.front().size();
  bool binary = true;
  for (const auto& row : values_) {
    if (row.size() != num_atoms_) throw std::invalid_argument("ragged hypothesis table");
    for (double v : row) {
      if (!(v >= -1.0 && v <= 1.0)) throw std::invalid_argument("hypothesis values must lie in [-1, 1]");
      if (v != 1.0 && v != -1.0) binary = false;
    }
  }
  kind_ = binary ? ClassKind::binary : ClassKind::real_valued;
}

FunctionClass::FunctionClass(std::vector<Function> functions, ClassKind kind)
    : functions_(std::move(functions)), kind_(kind) {
  if (functions_.empty()) throw std::invalid_argument("function class needs at least one function");
}

FunctionClass FunctionClass::constants(std::vector<double> values) {
  std::vector<Function> fs;
  bool binary = true;
  for (double v : values) {
    if (!(v >= -1.0 && v <= 1.0)) throw std::invalid_argument("hypothesis values must lie in [-1, 1]");
    if (v != 1.0 && v != -1.0) binary = false;
    fs.emplace_back([v](const Context&) { return v; });
  }
  return FunctionClass(std::move(fs), binary ? ClassKind::binary : ClassKind::real_valued);
}

double FunctionClass::evaluate(std::size_t h, const Context& x) const { return functions_[h](x); }

AnchoredClass::AnchoredClass(ClassPtr base, std::size_t anchor_id) : base_(std::move(base)), anchor_(anchor_id) {
  if (!base_) throw std::invalid_argument("null base class");
}

bool AnchoredClass::accepts(const Context& x) const { return is_anchor(x) || base_->accepts(x); }

double AnchoredClass::evaluate(std::size_t h, const Context& x) const {
  return is_anchor(x) ? 1.0 : base_->evaluate(h, x);
}

ContextMeasure AnchoredClass::anchored_measure(const ContextMeasure& mu) {
  const auto& p = mu.probabilities();
  std::vector<double> q(p.size() + 1);
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] / 3.0;
  q.back() = 2.0 / 3.0;
  std::vector<double> coords(mu.coordinates().begin(), mu.coordinates().end());
  if (coords.empty()) return ContextMeasure::finite_unembedded(DiscreteMeasure::from_weights(q));
  coords.push_back(1.0);
  return ContextMeasure::finite(DiscreteMeasure::from_weights(q), std::move(coords));
}

TableClass make_shattered_class(std::size_t m, double scale) {
  if (m == 0 || m > 20) throw std::invalid_argument("shattering set size must be in [1, 20]");
  if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("scale must lie in (0, 1]");
  const std::size_t patterns = std::size_t{1} << m;
  std::vector<std::vector<double>> values(patterns, std::vector<double>(m + 1, 0.0));
  for (std::size_t h = 0; h < patterns; ++h) {
    for (std::size_t i = 0; i < m; ++i) values[h][i] = ((h >> i) & 1U) ? scale : -scale;
  }
  return TableClass(std::move(values));
}

}  // namespace smoothol
