#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smoothol/adversary.hpp"
#include "smoothol/bandit.hpp"
#include "smoothol/context.hpp"
#include "smoothol/coupling.hpp"
#include "smoothol/hypothesis.hpp"
#include "smoothol/learner.hpp"
#include "smoothol/loss.hpp"
#include "smoothol/trace.hpp"

namespace smoothol {

/// Uniform base measure on `atoms` points at midpoints of [0, 1]; 0 atoms
/// means the unit interval.
struct MeasureSpec {
  std::size_t atoms = 256;
};

struct ClassSpec {
  std::string kind = "thresholds";  // thresholds | table | constants | shattered
  std::size_t size = 64;            // thresholds
  std::vector<std::vector<double>> table;
  std::vector<double> values;       // constants
  std::size_t shatter_m = 3;        // shattered
  double scale = 1.0;               // shattered
  bool anchored = false;            // adds x* with f(x*) = 1 for the learner
};

struct LabelSpec {
  std::string rule = "noisy_comparator";  // noisy_comparator | rademacher | adversarial_flip
  std::size_t hypothesis = 0;
  double flip = 0.0;
};

struct AdversarySpec {
  std::string kind = "iid";  // iid | adaptive_mixture | hidden_mu_threshold | rademacher_gap
  std::string p = "mu";      // iid only: mu | concentrated
  std::optional<double> center;
  LabelSpec labels;
};

struct ScheduleOverrides {
  std::optional<double> eta;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<double> epsilon;
  std::optional<double> zeta;
  std::optional<double> p;  // complexity exponent for the dual schedule
  std::optional<std::size_t> k;
  std::optional<double> delta;
};

struct ExperimentConfig {
  std::string learner = "relax-linear";
  AdversarySpec adversary;
  ClassSpec cls;
  MeasureSpec mu;
  std::string loss = "linear";
  std::size_t horizon = 100;
  double sigma = 1.0;
  std::vector<std::uint64_t> seeds{0};
  std::string output;  // empty: no files
  ScheduleOverrides schedule;
  std::vector<std::size_t> checkpoints;
  std::size_t threads = 0;  // 0: hardware concurrency
};

const std::vector<std::string>& learner_names();
const std::vector<std::string>& adversary_names();
const std::vector<std::string>& class_names();

/// Parses and validates a JSON document. Throws ConfigError naming the valid
/// choices for any unresolvable spec.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

/// Everything one trajectory needs, built fresh per seed.
struct Experiment {
  ClassPtr cls;          // the class regret is measured against
  LossFunction loss = LossFunction::linear();
  ContextMeasure mu = ContextMeasure::uniform_interval();  // the learner's base measure
  std::unique_ptr<SmoothAdversary> adversary;
  std::unique_ptr<OnlineLearner> learner;
};

Experiment build_experiment(const ExperimentConfig& config, std::uint64_t seed);

/// Plays T rounds: the seed's stream split(1) drives the adversary and
/// split(2) the learner, each split again by round. Throws
/// InvariantViolation when a prediction, loss or call count misbehaves.
RegretTrace run_trajectory(Experiment& experiment, std::size_t horizon, std::uint64_t seed);

/// Columns: t, context, label, prediction, instant_loss, cumulative_regret,
/// oracle_calls. Reals print with 17 significant digits.
void write_trace_csv(const RegretTrace& trace, std::ostream& out);

struct SeedSummary {
  std::uint64_t seed = 0;
  double final_regret = 0.0;
  std::vector<std::pair<std::size_t, double>> checkpoints;
  std::uint64_t oracle_calls = 0;
  double wall_time_s = 0.0;
  double learner_loss = 0.0;
  double comparator_loss = 0.0;
};

struct SummaryRecord {
  std::vector<SeedSummary> runs;
  double mean_final_regret = 0.0;
  double std_final_regret = 0.0;
  double mean_oracle_calls = 0.0;
};

/// Mean and sample standard deviation over the per-seed rows.
void aggregate(SummaryRecord& summary);
std::string summary_to_json(const SummaryRecord& summary);

/// One trajectory per seed (concurrently). Writes trace_seed_<seed>.csv and
/// summary.json under config.output when it is set.
SummaryRecord run_experiment(const ExperimentConfig& config);

struct SweepResult {
  std::string value;
  SummaryRecord summary;
};

/// One run_experiment per value of a top-level or dotted config key
/// (e.g. "sigma", "schedule.eta"). Values that parse as JSON are used as
/// such, anything else as a string. Writes <output>/<param>=<value>/ and a
/// long-format <output>/sweep.csv. Throws ConfigError when the key is not in
/// the template.
std::vector<SweepResult> sweep(const std::string& template_json, const std::string& param,
                               const std::vector<std::string>& values);

struct BanditConfig {
  std::size_t num_actions = 2;
  std::size_t num_contexts = 8;
  std::size_t num_hypotheses = 4;
  double sigma = 0.5;
  std::size_t horizon = 2000;
  std::optional<double> gamma;
  std::optional<double> rademacher;  // defaults to rademacher_proxy(T, |F|)
  std::string regressor = "relax-general";  // relax-general | ftpl-dual
  ActionTable table;                  // empty: random in [0.1, 0.9]
  std::uint64_t table_seed = 7;
  std::size_t comparator = 0;
  std::string contexts = "concentrated";  // mu | concentrated
  double center = 0.5;
  ScheduleOverrides schedule;
  std::vector<std::uint64_t> seeds{0};
  std::string output;
  std::size_t threads = 0;
};

BanditConfig parse_bandit_config(const std::string& json_text);
BanditConfig load_bandit_config(const std::string& path);

/// The action table a config resolves to.
ActionTable resolve_table(const BanditConfig& config);

/// gamma/2 Reg_Sq + 4 gamma log(2T) + 2KT/gamma + sqrt(2T log(2T)) + 1.
double square_cb_bound(double reg_sq, double gamma, std::size_t num_actions, std::size_t horizon);

struct BanditSeedSummary {
  std::uint64_t seed = 0;
  double reg_cb = 0.0;
  double reg_cb_realized = 0.0;
  double reg_sq = 0.0;
  double gamma = 0.0;
  double bound = 0.0;
  std::uint64_t oracle_calls = 0;
  std::size_t clamp_warnings = 0;
  double wall_time_s = 0.0;
};

BanditResult run_bandit_seed(const BanditConfig& config, std::uint64_t seed);

/// One SquareCB run per seed (concurrently). Writes bandit_seed_<seed>.csv and
/// summary.json under config.output when it is set.
std::vector<BanditSeedSummary> run_bandit(const BanditConfig& config);
std::string bandit_summary_to_json(const std::vector<BanditSeedSummary>& runs);

std::string coupling_report_to_json(const CouplingReport& report);

}  // namespace smoothol
