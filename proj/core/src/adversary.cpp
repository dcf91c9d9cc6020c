#include "smoothol/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace smoothol {

std::string to_string(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::iid: return "iid";
    case AdversaryKind::adaptive_mixture: return "adaptive_mixture";
    case AdversaryKind::hidden_mu_threshold: return "hidden_mu_threshold";
    case AdversaryKind::rademacher_gap: return "rademacher_gap";
  }
  return "unknown";
}

LabelRule LabelRule::noisy_comparator(ClassPtr cls, std::size_t hypothesis, double flip) {
  if (!cls) throw std::invalid_argument("noisy comparator needs a class");
  if (hypothesis >= cls->size()) throw std::out_of_range("comparator index out of range");
  if (!(flip >= 0.0 && flip <= 1.0)) throw std::invalid_argument("flip probability must lie in [0, 1]");
  LabelRule r(Kind::noisy_comparator);
  r.cls_ = std::move(cls);
  r.hypothesis_ = hypothesis;
  r.flip_ = flip;
  return r;
}

LabelRule LabelRule::rademacher() { return LabelRule(Kind::rademacher); }

LabelRule LabelRule::adversarial_flip() { return LabelRule(Kind::adversarial_flip); }

double LabelRule::operator()(const Context& x, std::optional<double> last_prediction, Rng& rng) const {
  switch (kind_) {
    case Kind::noisy_comparator: {
      const double y = cls_->at(hypothesis_, x) >= 0.0 ? 1.0 : -1.0;
      return rng.bernoulli(flip_) ? -y : y;
    }
    case Kind::rademacher:
      return rng.rademacher();
    case Kind::adversarial_flip:
      if (!last_prediction) return rng.rademacher();
      return *last_prediction >= 0.0 ? -1.0 : 1.0;
  }
  return 0.0;
}

SmoothAdversary::Round SmoothAdversary::next_round(std::optional<double> last_prediction, Rng& rng) {
  prepare_round(last_prediction, rng);
  return emit_round(rng);
}

void SmoothAdversary::prepare_round(std::optional<double> last_prediction, Rng& rng) {
  if (!history_.empty()) history_.back().prediction = last_prediction;
  advance(rng);
}

SmoothAdversary::Round SmoothAdversary::emit_round(Rng& rng) {
  Round r = draw(rng);
  history_.push_back({r.context, r.label, std::nullopt});
  return r;
}

IidAdversary::IidAdversary(SmoothnessCertificate certificate, LabelRule labels)
    : SmoothAdversary(std::move(certificate)), labels_(std::move(labels)) {}

IidAdversary::IidAdversary(SmoothnessCertificate certificate, DiscreteMeasure p, LabelRule labels)
    : SmoothAdversary(std::move(certificate)), p_(std::move(p)), labels_(std::move(labels)) {
  const auto& mu = certificate_.base_measure;
  if (!mu.is_finite() || mu.size() != p_->size()) {
    throw std::invalid_argument("p must live on the finite ground set of mu");
  }
}

std::optional<DiscreteMeasure> IidAdversary::next_distribution() const {
  if (p_) return p_;
  if (certificate_.base_measure.is_finite()) return certificate_.base_measure.probabilities();
  return std::nullopt;
}

SmoothAdversary::Round IidAdversary::draw(Rng& rng) {
  const Context x = p_ ? certificate_.base_measure.atom(p_->sample(rng)) : certificate_.base_measure.sample(rng);
  const auto last = history_.empty() ? std::nullopt : history_.back().prediction;
  return {x, labels_(x, last, rng)};
}

AdaptiveMixtureAdversary::AdaptiveMixtureAdversary(SmoothnessCertificate certificate, LabelRule labels)
    : SmoothAdversary(std::move(certificate)), labels_(std::move(labels)) {
  if (!certificate_.base_measure.is_finite()) {
    throw std::invalid_argument("adaptive_mixture needs a finite base measure");
  }
}

void AdaptiveMixtureAdversary::advance(Rng& rng) {
  const std::size_t n = certificate_.base_measure.size();
  if (!history_.empty()) {
    const auto& last = history_.back();
    const bool wrong = !last.prediction || *last.prediction * last.label <= 0.0;
    if (wrong) {
      target_ = last.context.id();
      return;
    }
  }
  target_ = rng.uniform_int(n);
}

std::optional<DiscreteMeasure> AdaptiveMixtureAdversary::next_distribution() const {
  const auto& base = certificate_.base_measure;
  const auto& mu = base.probabilities();
  const double sigma = certificate_.sigma;
  const std::size_t n = mu.size();

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = sigma * mu[i];
  w[target_] += 1.0 - sigma;

  double excess = std::max(0.0, w[target_] - mu[target_] / sigma);
  w[target_] -= excess;
  if (excess > 0.0) {
    // Nearest atoms first: by coordinate when embedded, else by index.
    const auto coords = base.coordinates();
    auto distance = [&](std::size_t i) {
      const double a = coords.empty() ? static_cast<double>(i) : coords[i];
      const double b = coords.empty() ? static_cast<double>(target_) : coords[target_];
      return std::abs(a - b);
    };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distance(a) < distance(b); });
    for (std::size_t i : order) {
      if (excess <= 0.0) break;
      const double room = mu[i] / sigma - w[i];
      if (room <= 0.0) continue;
      const double take = std::min(room, excess);
      w[i] += take;
      excess -= take;
    }
  }
  return DiscreteMeasure::from_weights(w);
}

SmoothAdversary::Round AdaptiveMixtureAdversary::draw(Rng& rng) {
  const auto p = next_distribution();
  const Context x = certificate_.base_measure.atom(p->sample(rng));
  const auto last = history_.empty() ? std::nullopt : history_.back().prediction;
  return {x, labels_(x, last, rng)};
}

HiddenMuThresholdAdversary::HiddenMuThresholdAdversary(double sigma)
    : SmoothAdversary(SmoothnessCertificate(sigma, ContextMeasure::uniform_interval())) {}

SmoothAdversary::Round HiddenMuThresholdAdversary::draw(Rng& rng) {
  constexpr std::uint64_t one = std::uint64_t{1} << kMaxExponent;
  const std::size_t t = history_.size() + 1;
  double y = 0.0;
  if (t == 1) {
    numerator_ = 0;
    y = -1.0;
  } else if (t == 2) {
    numerator_ = one;
    y = 1.0;
  } else {
    const int exponent = static_cast<int>(std::min<std::size_t>(t - 2, kMaxExponent));
    const std::uint64_t step = std::uint64_t{1} << (kMaxExponent - exponent);
    if (history_.back().label > 0.0) {
      numerator_ = numerator_ >= step ? numerator_ - step : 0;
    } else {
      numerator_ = std::min(numerator_ + step, one);
    }
    y = rng.rademacher();
  }
  const double x = std::ldexp(static_cast<double>(numerator_), -kMaxExponent);
  return {Context::point(x), y};
}

RademacherGapAdversary::RademacherGapAdversary(SmoothnessCertificate certificate,
                                               std::vector<std::size_t> shattering_atoms, std::size_t anchor)
    : SmoothAdversary(std::move(certificate)), atoms_(std::move(shattering_atoms)), anchor_(anchor) {
  if (atoms_.empty()) throw std::invalid_argument("empty shattering set");
}

std::optional<DiscreteMeasure> RademacherGapAdversary::next_distribution() const {
  std::vector<double> p(certificate_.base_measure.size(), 0.0);
  for (std::size_t a : atoms_) p[a] = 1.0 / static_cast<double>(atoms_.size());
  return DiscreteMeasure::from_weights(p);
}

SmoothAdversary::Round RademacherGapAdversary::draw(Rng& rng) {
  const std::size_t a = atoms_[rng.uniform_int(atoms_.size())];
  return {certificate_.base_measure.atom(a), static_cast<double>(rng.rademacher())};
}

std::unique_ptr<RademacherGapAdversary> build_rademacher_gap_adversary(double sigma, std::size_t m,
                                                                       const TableClass& cls, double scale) {
  if (m == 0 || m > 20) throw std::invalid_argument("shattering set size must lie in [1, 20]");
  if (cls.num_atoms() < m + 1) throw std::invalid_argument("class lacks x* or shattering set");
  for (std::size_t h = 0; h < cls.size(); ++h) {
    if (cls.row(h)[m] != 0.0) throw std::invalid_argument("class lacks x*: some hypothesis is nonzero on atom m");
  }
  std::set<std::uint32_t> patterns;
  for (std::size_t h = 0; h < cls.size(); ++h) {
    const auto row = cls.row(h);
    bool margin = true;
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(row[i]) < scale) {
        margin = false;
        break;
      }
      if (row[i] > 0.0) bits |= std::uint32_t{1} << i;
    }
    if (margin) patterns.insert(bits);
  }
  if (patterns.size() != (std::size_t{1} << m)) throw std::invalid_argument("class lacks a shattering set at this scale");

  std::vector<double> mu(cls.num_atoms(), 0.0);
  mu[m] = 1.0 - sigma;
  for (std::size_t i = 0; i < m; ++i) mu[i] = sigma / static_cast<double>(m);
  SmoothnessCertificate cert(sigma, ContextMeasure::finite_unembedded(DiscreteMeasure::from_weights(mu)));
  std::vector<std::size_t> atoms(m);
  std::iota(atoms.begin(), atoms.end(), 0);
  return std::make_unique<RademacherGapAdversary>(std::move(cert), std::move(atoms), m);
}

SmoothnessReport verify_smoothness(const SmoothAdversary& adversary, std::size_t num_probes, std::uint64_t seed) {
  const auto& cert = adversary.certificate();
  if (!cert.base_measure.is_finite()) throw std::invalid_argument("not checkable exactly");
  const auto& mu = cert.base_measure.probabilities();
  auto probe = adversary.clone();
  Rng rng(seed);
  SmoothnessReport report;
  std::optional<double> prediction;
  for (std::size_t i = 0; i < std::max<std::size_t>(num_probes, 1); ++i) {
    Rng round = rng.split(i);
    probe->prepare_round(prediction, round);
    const auto p = probe->next_distribution();
    if (!p) throw std::invalid_argument("not checkable exactly");
    report.max_density_ratio = std::max(report.max_density_ratio, max_density_ratio(*p, mu));
    probe->emit_round(round);
    prediction = round.uniform() * 2.0 - 1.0;
  }
  report.pass = report.max_density_ratio <= 1.0 / cert.sigma + 1e-9;
  return report;
}

}  // namespace smoothol
