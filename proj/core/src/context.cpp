#include "smoothol/context.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace smoothol {

Context Context::atom(std::size_t id) {
  Context c;
  c.id_ = id;
  return c;
}

Context Context::atom(std::size_t id, double coordinate) {
  Context c = point(coordinate);
  c.id_ = id;
  return c;
}

Context Context::point(double coordinate) {
  if (!(coordinate >= 0.0 && coordinate <= 1.0)) {
    throw std::invalid_argument("context coordinate must lie in [0, 1]");
  }
  Context c;
  c.coordinate_ = coordinate;
  return c;
}

std::size_t Context::id() const {
  if (!id_) throw std::logic_error("context has no atom id");
  return *id_;
}

double Context::coordinate() const {
  if (!coordinate_) throw std::logic_error("context has no coordinate");
  return *coordinate_;
}

std::string Context::to_string() const {
  if (id_) return std::to_string(*id_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *coordinate_);
  return buf;
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> probabilities) : probs_(std::move(probabilities)) {
  if (probs_.empty()) throw std::invalid_argument("empty probability vector");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative or NaN probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("probabilities must sum to 1");
  cdf_.resize(probs_.size());
  std::partial_sum(probs_.begin(), probs_.end(), cdf_.begin());
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform measure needs n > 0");
  return DiscreteMeasure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DiscreteMeasure DiscreteMeasure::from_weights(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("weights must have positive total");
  std::vector<double> p(weights.begin(), weights.end());
  for (double& v : p) v /= total;
  // Push the rounding residue onto the largest entry.
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  auto it = std::max_element(p.begin(), p.end());
  *it += 1.0 - sum;
  return DiscreteMeasure(std::move(p));
}

std::size_t DiscreteMeasure::sample(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  if (i >= probs_.size()) i = probs_.size() - 1;
  // Never land on a null atom because of a flat cdf step.
  while (probs_[i] == 0.0 && i > 0) --i;
  while (probs_[i] == 0.0) ++i;
  return i;
}

double max_density_ratio(const DiscreteMeasure& p, const DiscreteMeasure& mu) {
  if (p.size() != mu.size()) throw std::invalid_argument("measures live on different ground sets");
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (mu[i] == 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, p[i] / mu[i]);
  }
  return worst;
}

DiscreteMeasure concentrated_measure(const DiscreteMeasure& mu, std::span<const double> coordinates,
                                     double sigma, double center) {
  if (coordinates.size() != mu.size()) throw std::invalid_argument("coordinate/measure size mismatch");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must lie in (0, 1]");
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(coordinates[a] - center) < std::abs(coordinates[b] - center);
  });
  std::vector<double> p(mu.size(), 0.0);
  double remaining = 1.0;
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    const double cap = mu[i] / sigma;
    const double take = std::min(cap, remaining);
    p[i] = take;
    remaining -= take;
  }
  return DiscreteMeasure::from_weights(p);
}

std::vector<double> midpoint_coordinates(std::size_t n) {
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return c;
}

ContextMeasure ContextMeasure::finite(DiscreteMeasure probabilities) {
  auto coords = midpoint_coordinates(probabilities.size());
  return finite(std::move(probabilities), std::move(coords));
}

ContextMeasure ContextMeasure::finite(DiscreteMeasure probabilities, std::vector<double> coordinates) {
  if (coordinates.size() != probabilities.size()) throw std::invalid_argument("coordinate/measure size mismatch");
  for (double c : coordinates) {
    if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("atom coordinates must lie in [0, 1]");
  }
  ContextMeasure m;
  m.probs_.emplace(std::move(probabilities));
  m.coords_ = std::move(coordinates);
  return m;
}

ContextMeasure ContextMeasure::finite_unembedded(DiscreteMeasure probabilities) {
  ContextMeasure m;
  m.probs_.emplace(std::move(probabilities));
  m.embedded_ = false;
  return m;
}

ContextMeasure ContextMeasure::uniform_interval() { return ContextMeasure{}; }

std::size_t ContextMeasure::size() const { return probs_ ? probs_->size() : 0; }

const DiscreteMeasure& ContextMeasure::probabilities() const {
  if (!probs_) throw std::logic_error("continuous base measure has no probability vector");
  return *probs_;
}

Context ContextMeasure::atom(std::size_t i) const {
  if (!probs_ || i >= probs_->size()) throw std::out_of_range("atom index out of range");
  return embedded_ ? Context::atom(i, coords_[i]) : Context::atom(i);
}

Context ContextMeasure::sample(Rng& rng) const {
  if (probs_) return atom(probs_->sample(rng));
  return Context::point(rng.uniform());
}

SmoothnessCertificate::SmoothnessCertificate(double sigma_, ContextMeasure base)
    : sigma(sigma_), base_measure(std::move(base)) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must lie in (0, 1]");
}

}  // namespace smoothol
