#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "smoothol/context.hpp"
#include "smoothol/hypothesis.hpp"
#include "smoothol/learner.hpp"
#include "smoothol/loss.hpp"
#include "smoothol/oracle.hpp"
#include "smoothol/rng.hpp"

namespace smoothol {

enum class FtplVariant { classification, dual, single };

/// Accepts "classification"/"cls", "dual", "single"; throws
/// std::invalid_argument("unknown variant").
FtplVariant parse_ftpl_variant(const std::string& name);
std::string to_string(FtplVariant variant);

struct FtplSchedule {
  FtplVariant variant = FtplVariant::classification;
  double eta = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  double epsilon = 0.0;  // label grid step; unused by classification
  double zeta = 0.0;
};

/// Parameter schedules:
///   classification  eta = sqrt(T log(T L / sigma) / sigma), n = ceil(T / sqrt(sigma))
///   dual, p < 2     eta = T^{2/3} sigma^{-1/3}, n = ceil(sqrt(T / sigma)), eps = T^{-1/3}
///   dual, p >= 2    eta = T^{2/p}, n = T, eps = (sigma T)^{-1/(p+1)}
///   single          eta = T^{5/12} sigma^{-1/4}, n = ceil(eta^2), eps = T^{-3/4} sigma^{-1/4}
/// For dual, m = n. Values within 1e-9 (relative) of an integer are snapped
/// before rounding up.
FtplSchedule ftpl_schedule(std::size_t horizon, double sigma, double lipschitz, double p, FtplVariant variant);

/// eps Z intersected with [-1, 1], plus both endpoints when 2 / eps is an integer.
std::vector<double> label_grid(double epsilon);

/// Anchors Z_i ~ mu with i.i.d. standard normal coefficients.
///   inv_sqrt_n:  w(f) = n^{-1/2} sum_i gamma_i f(Z_i)
///   none:        w(f) = sum_j gamma_j l(f(Z_j), y_j), labels y_j uniform on a grid
struct GaussianPerturbation {
  enum class Normalization { inv_sqrt_n, none };

  Normalization normalization = Normalization::inv_sqrt_n;
  std::vector<Context> anchors;
  std::vector<double> coeffs;
  std::vector<double> labels;  // empty for inv_sqrt_n

  std::size_t size() const { return anchors.size(); }
  double value(const HypothesisClass& cls, std::size_t h, const LossFunction& loss) const;
};

GaussianPerturbation draw_gaussian_process(const ContextMeasure& mu, std::size_t n, Rng& rng);
GaussianPerturbation draw_label_process(const ContextMeasure& mu, std::size_t n, double epsilon, Rng& rng);
/// New coefficients with the anchors (and labels) kept.
void resample_coefficients(GaussianPerturbation& pert, Rng& rng);

/// One oracle call on L_{t-1}(f) + eta w_n(f).
ErmResult ftpl_select_classification(const HistoryRows& history, const GaussianPerturbation& pert, double eta,
                                     ErmOracle& oracle);
/// One oracle call on L_{t-1}(f) + eta w_m(f) + w'_n(f).
ErmResult ftpl_select_dual(const HistoryRows& history, const GaussianPerturbation& pert_m,
                           const GaussianPerturbation& pert_n, double eta, ErmOracle& oracle);
/// One oracle call on L_{t-1}(f) + (eta / sqrt(n)) w'_n(f).
ErmResult ftpl_select_single(const HistoryRows& history, const GaussianPerturbation& pert, double eta_over_sqrt_n,
                             ErmOracle& oracle);

/// Proper learner: fresh perturbations and one oracle call per round, in
/// begin_round, before the context is seen. The schedule's zeta overrides
/// the oracle accuracy in `oracle_options`.
class FtplLearner final : public OnlineLearner {
 public:
  FtplLearner(ClassPtr cls, LossFunction loss, ContextMeasure mu, FtplSchedule schedule,
              OracleOptions oracle_options = {});

  void begin_round(std::size_t t, Rng& rng) override;
  double predict(const Context& x) override;
  void observe(const Context& x, double y) override { history_.add(x, y); }
  std::optional<std::size_t> committed_hypothesis() const override { return committed_; }
  std::uint64_t oracle_calls() const override { return oracle_.call_count(); }
  std::string name() const override;

  const FtplSchedule& schedule() const { return schedule_; }
  const HistoryRows& history() const { return history_; }

 private:
  ClassPtr cls_;
  ContextMeasure mu_;
  FtplSchedule schedule_;
  ErmOracle oracle_;
  HistoryRows history_;
  std::optional<std::size_t> committed_;
};

}  // namespace smoothol
