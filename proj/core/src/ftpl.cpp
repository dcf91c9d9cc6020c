#include "smoothol/ftpl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smoothol {

FtplVariant parse_ftpl_variant(const std::string& name) {
  if (name == "classification" || name == "cls") return FtplVariant::classification;
  if (name == "dual") return FtplVariant::dual;
  if (name == "single") return FtplVariant::single;
  throw std::invalid_argument("unknown variant");
}

std::string to_string(FtplVariant variant) {
  switch (variant) {
    case FtplVariant::classification: return "classification";
    case FtplVariant::dual: return "dual";
    case FtplVariant::single: return "single";
  }
  return "unknown";
}

namespace {

std::size_t ceil_snapped(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

FtplSchedule ftpl_schedule(std::size_t horizon, double sigma, double lipschitz, double p, FtplVariant variant) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("sigma must lie in (0, 1]");
  const double T = static_cast<double>(horizon);
  FtplSchedule s;
  s.variant = variant;
  switch (variant) {
    case FtplVariant::classification:
      s.eta = std::sqrt(T * std::log(T * lipschitz / sigma) / sigma);
      s.n = ceil_snapped(T / std::sqrt(sigma));
      break;
    case FtplVariant::dual:
      if (p < 2.0) {
        s.eta = std::pow(T, 2.0 / 3.0) * std::pow(sigma, -1.0 / 3.0);
        s.n = ceil_snapped(std::sqrt(T / sigma));
        s.epsilon = std::pow(T, -1.0 / 3.0);
      } else {
        s.eta = std::pow(T, 2.0 / p);
        s.n = horizon;
        s.epsilon = std::pow(sigma * T, -1.0 / (p + 1.0));
      }
      s.m = s.n;
      break;
    case FtplVariant::single:
      s.eta = std::pow(T, 5.0 / 12.0) * std::pow(sigma, -0.25);
      s.n = ceil_snapped(s.eta * s.eta);
      s.epsilon = std::pow(T, -0.75) * std::pow(sigma, -0.25);
      break;
  }
  return s;
}

std::vector<double> label_grid(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto kmax = static_cast<long long>(std::floor(1.0 / epsilon + 1e-9));
  std::vector<double> grid;
  for (long long k = -kmax; k <= kmax; ++k) grid.push_back(std::clamp(static_cast<double>(k) * epsilon, -1.0, 1.0));
  const double ratio = 2.0 / epsilon;
  if (std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio)) {
    grid.push_back(-1.0);
    grid.push_back(1.0);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
             grid.end());
  return grid;
}

double GaussianPerturbation::value(const HypothesisClass& cls, std::size_t h, const LossFunction& loss) const {
  double total = 0.0;
  if (normalization == Normalization::inv_sqrt_n) {
    for (std::size_t i = 0; i < anchors.size(); ++i) total += coeffs[i] * cls.at(h, anchors[i]);
    return anchors.empty() ? 0.0 : total / std::sqrt(static_cast<double>(anchors.size()));
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) total += coeffs[i] * loss(cls.at(h, anchors[i]), labels[i]);
  return total;
}

GaussianPerturbation draw_gaussian_process(const ContextMeasure& mu, std::size_t n, Rng& rng) {
  GaussianPerturbation g;
  g.normalization = GaussianPerturbation::Normalization::inv_sqrt_n;
  g.anchors.reserve(n);
  g.coeffs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.anchors.push_back(mu.sample(rng));
    g.coeffs.push_back(rng.normal());
  }
  return g;
}

GaussianPerturbation draw_label_process(const ContextMeasure& mu, std::size_t n, double epsilon, Rng& rng) {
  const auto grid = label_grid(epsilon);
  GaussianPerturbation g;
  g.normalization = GaussianPerturbation::Normalization::none;
  g.anchors.reserve(n);
  g.coeffs.reserve(n);
  g.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.anchors.push_back(mu.sample(rng));
    g.labels.push_back(grid[rng.uniform_int(grid.size())]);
    g.coeffs.push_back(rng.normal());
  }
  return g;
}

void resample_coefficients(GaussianPerturbation& pert, Rng& rng) {
  for (double& c : pert.coeffs) c = rng.normal();
}

namespace {

void append_identity(ErmQuery& q, const GaussianPerturbation& pert, double scale) {
  ErmQuery rows;
  for (std::size_t i = 0; i < pert.size(); ++i) {
    rows.add(pert.anchors[i], 0.0, scale * pert.coeffs[i], LossSelector::identity_loss);
  }
  rows = compact(rows);
  q.rows.insert(q.rows.end(), rows.rows.begin(), rows.rows.end());
}

void append_labelled(ErmQuery& q, const GaussianPerturbation& pert, double scale) {
  ErmQuery rows;
  for (std::size_t i = 0; i < pert.size(); ++i) {
    rows.add(pert.anchors[i], pert.labels[i], scale * pert.coeffs[i], LossSelector::main_loss);
  }
  rows = compact(rows);
  q.rows.insert(q.rows.end(), rows.rows.begin(), rows.rows.end());
}

OracleOptions with_zeta(OracleOptions options, double zeta) {
  options.zeta = zeta;
  return options;
}

ErmQuery history_query(const HistoryRows& history) {
  ErmQuery q;
  q.rows = history.rows();
  return q;
}

}  // namespace

ErmResult ftpl_select_classification(const HistoryRows& history, const GaussianPerturbation& pert, double eta,
                                     ErmOracle& oracle) {
  ErmQuery q = history_query(history);
  if (pert.size() > 0 && eta != 0.0) {
    append_identity(q, pert, eta / std::sqrt(static_cast<double>(pert.size())));
  }
  return oracle.minimize(q);
}

ErmResult ftpl_select_dual(const HistoryRows& history, const GaussianPerturbation& pert_m,
                           const GaussianPerturbation& pert_n, double eta, ErmOracle& oracle) {
  ErmQuery q = history_query(history);
  if (pert_m.size() > 0 && eta != 0.0) {
    append_identity(q, pert_m, eta / std::sqrt(static_cast<double>(pert_m.size())));
  }
  if (pert_n.size() > 0) append_labelled(q, pert_n, 1.0);
  return oracle.minimize(q);
}

ErmResult ftpl_select_single(const HistoryRows& history, const GaussianPerturbation& pert, double eta_over_sqrt_n,
                             ErmOracle& oracle) {
  ErmQuery q = history_query(history);
  if (pert.size() > 0 && eta_over_sqrt_n != 0.0) append_labelled(q, pert, eta_over_sqrt_n);
  return oracle.minimize(q);
}

FtplLearner::FtplLearner(ClassPtr cls, LossFunction loss, ContextMeasure mu, FtplSchedule schedule,
                         OracleOptions oracle_options)
    : cls_(cls),
      mu_(std::move(mu)),
      schedule_(schedule),
      oracle_(std::move(cls), std::move(loss), with_zeta(oracle_options, schedule.zeta)) {
  if (!(schedule_.eta >= 0.0)) throw std::invalid_argument("eta must be nonnegative");
  if (schedule_.variant != FtplVariant::classification && schedule_.n > 0 && !(schedule_.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
}

void FtplLearner::begin_round(std::size_t /*t*/, Rng& rng) {
  ErmResult r;
  switch (schedule_.variant) {
    case FtplVariant::classification: {
      const auto pert = draw_gaussian_process(mu_, schedule_.n, rng);
      r = ftpl_select_classification(history_, pert, schedule_.eta, oracle_);
      break;
    }
    case FtplVariant::dual: {
      const auto pert_m = draw_gaussian_process(mu_, schedule_.m, rng);
      const auto pert_n = schedule_.n > 0 ? draw_label_process(mu_, schedule_.n, schedule_.epsilon, rng)
                                          : GaussianPerturbation{GaussianPerturbation::Normalization::none, {}, {}, {}};
      r = ftpl_select_dual(history_, pert_m, pert_n, schedule_.eta, oracle_);
      break;
    }
    case FtplVariant::single: {
      const auto pert = schedule_.n > 0 ? draw_label_process(mu_, schedule_.n, schedule_.epsilon, rng)
                                        : GaussianPerturbation{GaussianPerturbation::Normalization::none, {}, {}, {}};
      const double scale = schedule_.n > 0 ? schedule_.eta / std::sqrt(static_cast<double>(schedule_.n)) : 0.0;
      r = ftpl_select_single(history_, pert, scale, oracle_);
      break;
    }
  }
  committed_ = r.hypothesis_index;
}

double FtplLearner::predict(const Context& x) {
  if (!committed_) throw std::logic_error("predict called before begin_round");
  return cls_->at(*committed_, x);
}

std::string FtplLearner::name() const {
  switch (schedule_.variant) {
    case FtplVariant::classification: return "ftpl-cls";
    case FtplVariant::dual: return "ftpl-dual";
    case FtplVariant::single: return "ftpl-single";
  }
  return "ftpl";
}

}  // namespace smoothol
