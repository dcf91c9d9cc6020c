#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothol/rng.hpp"

namespace smoothol {

/// A point of the instance space: an atom of a finite ground set (optionally
/// carrying its embedding in [0, 1]) or a bare coordinate in [0, 1].
class Context {
 public:
  Context() = default;

  static Context atom(std::size_t id);
  static Context atom(std::size_t id, double coordinate);
  static Context point(double coordinate);

  bool has_id() const { return id_.has_value(); }
  bool has_coordinate() const { return coordinate_.has_value(); }
  std::size_t id() const;
  double coordinate() const;

  /// Id when present, otherwise the coordinate printed with round-trip precision.
  std::string to_string() const;

  friend bool operator==(const Context&, const Context&) = default;
  friend auto operator<=>(const Context&, const Context&) = default;

 private:
  std::optional<std::size_t> id_;
  std::optional<double> coordinate_;
};

/// Probability vector over a finite ground set {0, ..., N-1}.
class DiscreteMeasure {
 public:
  /// Throws std::invalid_argument unless entries are nonnegative and sum to 1
  /// within 1e-12.
  explicit DiscreteMeasure(std::vector<double> probabilities);

  static DiscreteMeasure uniform(std::size_t n);
  /// Normalizes nonnegative weights.
  static DiscreteMeasure from_weights(std::span<const double> weights);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probabilities() const { return probs_; }

  /// Inverse-CDF sample.
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

/// max_i p_i / mu_i over the support of p; +inf when p charges a mu-null atom.
double max_density_ratio(const DiscreteMeasure& p, const DiscreteMeasure& mu);

/// The most concentrated sigma-smooth law around a target: fill atoms in order
/// of distance to `center` (ties to the lower index) with mass mu_i / sigma
/// until one unit of mass has been placed.
DiscreteMeasure concentrated_measure(const DiscreteMeasure& mu, std::span<const double> coordinates,
                                     double sigma, double center);

/// Base measure over contexts: either a finite ground set with an explicit
/// probability vector and per-atom coordinates, or Lebesgue measure on [0, 1].
class ContextMeasure {
 public:
  /// Atom i sits at coordinate (i + 0.5) / N.
  static ContextMeasure finite(DiscreteMeasure probabilities);
  static ContextMeasure finite(DiscreteMeasure probabilities, std::vector<double> coordinates);
  /// Atoms without coordinates (table-valued classes).
  static ContextMeasure finite_unembedded(DiscreteMeasure probabilities);
  static ContextMeasure uniform_interval();

  bool is_finite() const { return probs_.has_value(); }
  std::size_t size() const;
  const DiscreteMeasure& probabilities() const;
  std::span<const double> coordinates() const { return coords_; }
  Context atom(std::size_t i) const;

  Context sample(Rng& rng) const;

 private:
  std::optional<DiscreteMeasure> probs_;
  std::vector<double> coords_;
  bool embedded_ = true;
};

std::vector<double> midpoint_coordinates(std::size_t n);

/// sigma and the base measure mu of a sigma-smooth adversary.
struct SmoothnessCertificate {
  SmoothnessCertificate(double sigma, ContextMeasure base_measure);

  double sigma;
  ContextMeasure base_measure;
};

}  // namespace smoothol
