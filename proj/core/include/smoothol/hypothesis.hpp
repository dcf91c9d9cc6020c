#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "smoothol/context.hpp"

namespace smoothol {

enum class ClassKind { binary, real_valued };

/// A finite, ordered family F of functions X -> [-1, 1].
///
/// Hypothesis order is the tie-breaking order: every argmin over F in this
/// library resolves ties to the lowest index.
class HypothesisClass {
 public:
  virtual ~HypothesisClass() = default;

  virtual std::size_t size() const = 0;
  virtual ClassKind kind() const = 0;
  /// Whether `x` lies in the domain this class can evaluate.
  virtual bool accepts(const Context& x) const = 0;

  /// f_h(x) without the domain check.
  virtual double evaluate(std::size_t h, const Context& x) const = 0;
  /// Writes f_h(x) for every h into `out` (size() entries).
  virtual void evaluate_all(const Context& x, std::span<double> out) const;

  /// Checked evaluation; throws DomainMismatch.
  double at(std::size_t h, const Context& x) const;
};

using ClassPtr = std::shared_ptr<const HypothesisClass>;

/// x -> +1 if x >= theta else -1, for each theta in an ascending list.
/// Evaluates the context coordinate.
class ThresholdClass final : public HypothesisClass {
 public:
  explicit ThresholdClass(std::vector<double> thresholds);

  /// M thresholds evenly spaced on [0, 1], endpoints included (M >= 2).
  static ThresholdClass grid(std::size_t m);
  /// Thresholds realizing every labelling a threshold on [0, 1] can induce on
  /// `points`: 0, the midpoints between consecutive distinct points, and a
  /// value above 1. Exhaustive minimization over this class equals the
  /// infimum over all thresholds on those points.
  static ThresholdClass fitted(std::span<const double> points);

  std::size_t size() const override { return thresholds_.size(); }
  ClassKind kind() const override { return ClassKind::binary; }
  bool accepts(const Context& x) const override { return x.has_coordinate(); }
  double evaluate(std::size_t h, const Context& x) const override;
  void evaluate_all(const Context& x, std::span<double> out) const override;

  double threshold(std::size_t h) const { return thresholds_[h]; }

 private:
  std::vector<double> thresholds_;
};

/// Explicit table: values[h][atom] over a finite ground set indexed by atom id.
class TableClass final : public HypothesisClass {
 public:
  explicit TableClass(std::vector<std::vector<double>> values);

  std::size_t size() const override { return values_.size(); }
  ClassKind kind() const override { return kind_; }
  bool accepts(const Context& x) const override { return x.has_id() && x.id() < num_atoms_; }
  double evaluate(std::size_t h, const Context& x) const override { return values_[h][x.id()]; }

  std::size_t num_atoms() const { return num_atoms_; }
  std::span<const double> row(std::size_t h) const { return values_[h]; }

 private:
  std::vector<std::vector<double>> values_;
  std::size_t num_atoms_ = 0;
  ClassKind kind_ = ClassKind::real_valued;
};

/// Arbitrary callables; accepts every context.
class FunctionClass final : public HypothesisClass {
 public:
  using Function = std::function<double(const Context&)>;
  FunctionClass(std::vector<Function> functions, ClassKind kind);

  /// {x -> c} for each c in `values`.
  static FunctionClass constants(std::vector<double> values);

  std::size_t size() const override { return functions_.size(); }
  ClassKind kind() const override { return kind_; }
  bool accepts(const Context&) const override { return true; }
  double evaluate(std::size_t h, const Context& x) const override;

 private:
  std::vector<Function> functions_;
  ClassKind kind_;
};

/// Enlarges the domain with a distinguished atom x* (id = `anchor_id`) on which
/// every hypothesis equals 1; all other contexts defer to the wrapped class.
/// The matching base measure is mu~ = mu/3 + (2/3) delta_{x*}.
class AnchoredClass final : public HypothesisClass {
 public:
  AnchoredClass(ClassPtr base, std::size_t anchor_id);

  std::size_t size() const override { return base_->size(); }
  ClassKind kind() const override { return base_->kind(); }
  bool accepts(const Context& x) const override;
  double evaluate(std::size_t h, const Context& x) const override;

  std::size_t anchor_id() const { return anchor_; }
  Context anchor() const { return Context::atom(anchor_); }

  /// mu/3 + (2/3) delta at a new atom appended after the ground set of `mu`.
  static ContextMeasure anchored_measure(const ContextMeasure& mu);

 private:
  bool is_anchor(const Context& x) const { return x.has_id() && x.id() == anchor_; }

  ClassPtr base_;
  std::size_t anchor_;
};

/// Shattering construction: atoms 0..m-1 carry every sign pattern in
/// {-scale, +scale}^m (2^m hypotheses, pattern bits in index order) and atom m
/// is a point on which every hypothesis vanishes.
TableClass make_shattered_class(std::size_t m, double scale);

}  // namespace smoothol
