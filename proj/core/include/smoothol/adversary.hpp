#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smoothol/context.hpp"
#include "smoothol/hypothesis.hpp"
#include "smoothol/rng.hpp"

namespace smoothol {

enum class AdversaryKind { iid, adaptive_mixture, hidden_mu_threshold, rademacher_gap };

std::string to_string(AdversaryKind kind);

/// Parametric label strategies. The label may depend on the drawn context and
/// on the learner's previous prediction, nothing else.
class LabelRule {
 public:
  enum class Kind { noisy_comparator, rademacher, adversarial_flip };

  /// y = sign(f_h(x)) (sign(0) = +1), flipped with probability `flip`.
  static LabelRule noisy_comparator(ClassPtr cls, std::size_t hypothesis, double flip);
  static LabelRule rademacher();
  /// y = -sign(previous prediction); Rademacher before the first prediction.
  static LabelRule adversarial_flip();

  double operator()(const Context& x, std::optional<double> last_prediction, Rng& rng) const;

  Kind kind() const { return kind_; }

 private:
  explicit LabelRule(Kind kind) : kind_(kind) {}

  Kind kind_;
  ClassPtr cls_;
  std::size_t hypothesis_ = 0;
  double flip_ = 0.0;
};

struct HistoryEntry {
  Context context;
  double label = 0.0;
  std::optional<double> prediction;  // filled when the next round starts
};

/// A data source emitting (x_t, y_t) with a declared (sigma, mu) certificate.
class SmoothAdversary {
 public:
  struct Round {
    Context context;
    double label = 0.0;
  };

  explicit SmoothAdversary(SmoothnessCertificate certificate) : certificate_(std::move(certificate)) {}
  virtual ~SmoothAdversary() = default;

  virtual AdversaryKind kind() const = 0;
  virtual std::unique_ptr<SmoothAdversary> clone() const = 0;

  /// Law of the upcoming context on the finite ground set of the certificate,
  /// valid after prepare_round; nullopt when mu is not finite.
  virtual std::optional<DiscreteMeasure> next_distribution() const = 0;

  /// Plays one round: prepare_round then emit_round. `last_prediction` is
  /// the learner's prediction for the previous round (ignored on round 1).
  Round next_round(std::optional<double> last_prediction, Rng& rng);

  /// Records the previous prediction and commits to this round's law.
  void prepare_round(std::optional<double> last_prediction, Rng& rng);
  /// Draws (x_t, y_t) from the committed law and appends it to the history.
  Round emit_round(Rng& rng);

  const SmoothnessCertificate& certificate() const { return certificate_; }
  const std::vector<HistoryEntry>& history() const { return history_; }

 protected:
  /// Updates internal state once the previous prediction is known.
  virtual void advance(Rng& /*rng*/) {}
  virtual Round draw(Rng& rng) = 0;

  SmoothnessCertificate certificate_;
  std::vector<HistoryEntry> history_;
};

/// x_t ~ p i.i.d., p fixed. The constructor does not check p against mu;
/// verify_smoothness does.
class IidAdversary final : public SmoothAdversary {
 public:
  /// p = mu.
  IidAdversary(SmoothnessCertificate certificate, LabelRule labels);
  IidAdversary(SmoothnessCertificate certificate, DiscreteMeasure p, LabelRule labels);

  AdversaryKind kind() const override { return AdversaryKind::iid; }
  std::unique_ptr<SmoothAdversary> clone() const override { return std::make_unique<IidAdversary>(*this); }
  std::optional<DiscreteMeasure> next_distribution() const override;

 protected:
  Round draw(Rng& rng) override;

 private:
  std::optional<DiscreteMeasure> p_;
  LabelRule labels_;
};

/// p_t = (1 - sigma) delta_{target} + sigma mu, with each atom capped at
/// mu_i / sigma and the overflow moved to the nearest atoms. The target is the
/// previous context when the previous prediction had the wrong sign, and a
/// uniformly random atom otherwise. Needs a finite mu.
class AdaptiveMixtureAdversary final : public SmoothAdversary {
 public:
  AdaptiveMixtureAdversary(SmoothnessCertificate certificate, LabelRule labels);

  AdversaryKind kind() const override { return AdversaryKind::adaptive_mixture; }
  std::unique_ptr<SmoothAdversary> clone() const override {
    return std::make_unique<AdaptiveMixtureAdversary>(*this);
  }
  std::optional<DiscreteMeasure> next_distribution() const override;

  std::size_t target() const { return target_; }

 protected:
  void advance(Rng& rng) override;
  Round draw(Rng& rng) override;

 private:
  LabelRule labels_;
  std::size_t target_ = 0;
};

/// Threshold construction with a base measure the learner cannot know:
/// x_1 = 0, x_2 = 1, y_1 = -1, y_2 = +1, then x_t = x_{t-1} - y_{t-1} 2^{-(t-2)}
/// with Rademacher y_t for t >= 3. Every prefix is realizable by a threshold.
/// Positions are kept as exact dyadics; the step exponent saturates at 50, so
/// realizability is only guaranteed for the first 52 rounds.
class HiddenMuThresholdAdversary final : public SmoothAdversary {
 public:
  static constexpr int kMaxExponent = 50;

  /// The certificate records sigma; the base measure is the unit interval
  /// because the true mu depends on the realized sequence.
  explicit HiddenMuThresholdAdversary(double sigma);

  AdversaryKind kind() const override { return AdversaryKind::hidden_mu_threshold; }
  std::unique_ptr<SmoothAdversary> clone() const override {
    return std::make_unique<HiddenMuThresholdAdversary>(*this);
  }
  std::optional<DiscreteMeasure> next_distribution() const override { return std::nullopt; }

 protected:
  Round draw(Rng& rng) override;

 private:
  std::uint64_t numerator_ = 0;  // x = numerator / 2^kMaxExponent
};

/// i.i.d. uniform contexts on a shattering set with Rademacher labels,
/// certified against mu = (1 - sigma) delta_{x*} + sigma Unif(shattering set).
class RademacherGapAdversary final : public SmoothAdversary {
 public:
  RademacherGapAdversary(SmoothnessCertificate certificate, std::vector<std::size_t> shattering_atoms,
                         std::size_t anchor);

  AdversaryKind kind() const override { return AdversaryKind::rademacher_gap; }
  std::unique_ptr<SmoothAdversary> clone() const override {
    return std::make_unique<RademacherGapAdversary>(*this);
  }
  std::optional<DiscreteMeasure> next_distribution() const override;

  std::size_t anchor() const { return anchor_; }
  const std::vector<std::size_t>& shattering_atoms() const { return atoms_; }

 private:
  Round draw(Rng& rng) override;

  std::vector<std::size_t> atoms_;
  std::size_t anchor_;
};

/// Checks that atom `m` of `cls` vanishes for every hypothesis and that atoms
/// 0..m-1 are shattered at margin `scale` (every sign pattern realized with
/// |f| >= scale). Throws std::invalid_argument otherwise.
std::unique_ptr<RademacherGapAdversary> build_rademacher_gap_adversary(double sigma, std::size_t m,
                                                                       const TableClass& cls, double scale);

struct SmoothnessReport {
  double max_density_ratio = 0.0;
  bool pass = false;
};

/// Replays `num_probes` rounds of a copy of `adversary` (feeding random
/// predictions) and takes the largest exact density ratio of the emitted
/// conditional laws against mu. Throws std::invalid_argument("not checkable
/// exactly") unless the base measure is finite.
SmoothnessReport verify_smoothness(const SmoothAdversary& adversary, std::size_t num_probes, std::uint64_t seed = 0);

}  // namespace smoothol
