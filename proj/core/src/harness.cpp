#include "smoothol/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "smoothol/errors.hpp"
#include "smoothol/ftpl.hpp"
#include "smoothol/relax.hpp"
#include "smoothol/stats.hpp"

namespace smoothol {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

void require_one_of(const std::string& what, const std::string& value, const std::vector<std::string>& valid) {
  if (std::find(valid.begin(), valid.end(), value) == valid.end()) {
    throw ConfigError("unknown " + what + " '" + value + "'; valid: " + join(valid));
  }
}

void reject_unknown_keys(const json& obj, const std::string& where, const std::vector<std::string>& known) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where + "; valid: " + join(known));
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void read(const json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  T v{};
  read(obj, key, v);
  out = v;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScheduleOverrides parse_schedule(const json& j) {
  if (!j.is_object()) throw ConfigError("'schedule' must be an object");
  reject_unknown_keys(j, "schedule", {"eta", "n", "m", "epsilon", "zeta", "p", "k", "delta"});
  ScheduleOverrides s;
  read(j, "eta", s.eta);
  read(j, "n", s.n);
  read(j, "m", s.m);
  read(j, "epsilon", s.epsilon);
  read(j, "zeta", s.zeta);
  read(j, "p", s.p);
  read(j, "k", s.k);
  read(j, "delta", s.delta);
  if (s.zeta && *s.zeta < 0.0) throw ConfigError("schedule.zeta must be nonnegative");
  if (s.k && *s.k == 0) throw ConfigError("schedule.k must be >= 1");
  if (s.delta && !(*s.delta > 0.0)) throw ConfigError("schedule.delta must be positive");
  return s;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

/// Runs job(i) for i in [0, jobs) on a small pool; rethrows the first failure.
template <typename Job>
void parallel_for(std::size_t jobs, std::size_t threads, Job job) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < worker_count(threads, jobs); ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

LabelRule build_labels(const LabelSpec& spec, const ClassPtr& cls) {
  if (spec.rule == "noisy_comparator") return LabelRule::noisy_comparator(cls, spec.hypothesis, spec.flip);
  if (spec.rule == "rademacher") return LabelRule::rademacher();
  return LabelRule::adversarial_flip();
}

}  // namespace

const std::vector<std::string>& learner_names() {
  static const std::vector<std::string> names{"relax-linear", "relax-general", "ftpl-cls", "ftpl-dual",
                                              "ftpl-single"};
  return names;
}

const std::vector<std::string>& adversary_names() {
  static const std::vector<std::string> names{"iid", "adaptive_mixture", "hidden_mu_threshold", "rademacher_gap"};
  return names;
}

const std::vector<std::string>& class_names() {
  static const std::vector<std::string> names{"thresholds", "table", "constants", "shattered"};
  return names;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j, "config",
                      {"learner", "adversary", "class", "mu", "loss", "T", "sigma", "seeds", "output", "schedule",
                       "checkpoints", "threads"});
  ExperimentConfig c;
  read(j, "learner", c.learner);
  read(j, "loss", c.loss);
  read(j, "T", c.horizon);
  read(j, "sigma", c.sigma);
  read(j, "seeds", c.seeds);
  read(j, "output", c.output);
  read(j, "checkpoints", c.checkpoints);
  read(j, "threads", c.threads);

  if (j.contains("mu")) {
    const auto& m = j.at("mu");
    reject_unknown_keys(m, "mu", {"atoms"});
    read(m, "atoms", c.mu.atoms);
  }
  if (j.contains("class")) {
    const auto& k = j.at("class");
    reject_unknown_keys(k, "class", {"kind", "size", "table", "values", "m", "scale", "anchored"});
    read(k, "kind", c.cls.kind);
    read(k, "size", c.cls.size);
    read(k, "table", c.cls.table);
    read(k, "values", c.cls.values);
    read(k, "m", c.cls.shatter_m);
    read(k, "scale", c.cls.scale);
    read(k, "anchored", c.cls.anchored);
  }
  if (j.contains("adversary")) {
    const auto& a = j.at("adversary");
    reject_unknown_keys(a, "adversary", {"kind", "p", "center", "labels"});
    read(a, "kind", c.adversary.kind);
    read(a, "p", c.adversary.p);
    read(a, "center", c.adversary.center);
    if (a.contains("labels")) {
      const auto& l = a.at("labels");
      reject_unknown_keys(l, "adversary.labels", {"rule", "hypothesis", "flip"});
      read(l, "rule", c.adversary.labels.rule);
      read(l, "hypothesis", c.adversary.labels.hypothesis);
      read(l, "flip", c.adversary.labels.flip);
    }
  }
  if (j.contains("schedule")) c.schedule = parse_schedule(j.at("schedule"));

  require_one_of("learner", c.learner, learner_names());
  require_one_of("adversary", c.adversary.kind, adversary_names());
  require_one_of("class", c.cls.kind, class_names());
  require_one_of("loss", c.loss, {"absolute", "linear", "square"});
  require_one_of("label rule", c.adversary.labels.rule, {"noisy_comparator", "rademacher", "adversarial_flip"});
  require_one_of("iid law", c.adversary.p, {"mu", "concentrated"});
  if (c.horizon < 1) throw ConfigError("T must be >= 1");
  if (!(c.sigma > 0.0 && c.sigma <= 1.0)) throw ConfigError("sigma must lie in (0, 1]");
  if (c.seeds.empty()) throw ConfigError("seeds must be nonempty");
  if (c.learner == "relax-linear" && c.loss != "linear") throw ConfigError("relax-linear requires the linear loss");
  if (c.adversary.kind == "rademacher_gap" && c.cls.kind != "shattered") {
    throw ConfigError("rademacher_gap requires the shattered class");
  }
  if (c.adversary.kind == "adaptive_mixture" && c.mu.atoms == 0) {
    throw ConfigError("adaptive_mixture requires a finite mu");
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) { return parse_experiment_config(read_file(path)); }

Experiment build_experiment(const ExperimentConfig& config, std::uint64_t seed) {
  Experiment e;
  e.loss = LossFunction::by_name(config.loss);

  std::shared_ptr<const HypothesisClass> cls;
  const auto& cs = config.cls;
  if (cs.kind == "thresholds") {
    cls = std::make_shared<ThresholdClass>(ThresholdClass::grid(cs.size));
  } else if (cs.kind == "table") {
    cls = std::make_shared<TableClass>(cs.table);
  } else if (cs.kind == "constants") {
    cls = std::make_shared<FunctionClass>(FunctionClass::constants(cs.values));
  } else {
    cls = std::make_shared<TableClass>(make_shattered_class(cs.shatter_m, cs.scale));
  }
  e.cls = cls;

  ContextMeasure mu = config.mu.atoms > 0 ? ContextMeasure::finite(DiscreteMeasure::uniform(config.mu.atoms))
                                          : ContextMeasure::uniform_interval();
  if (cs.kind == "table" || cs.kind == "shattered") {
    const auto& table = static_cast<const TableClass&>(*cls);
    if (config.mu.atoms > 0 && config.mu.atoms != table.num_atoms()) {
      throw ConfigError("mu.atoms must equal the number of table columns");
    }
    mu = ContextMeasure::finite_unembedded(DiscreteMeasure::uniform(table.num_atoms()));
  }

  const auto& as = config.adversary;
  const LabelRule labels = build_labels(as.labels, cls);
  if (as.kind == "iid") {
    SmoothnessCertificate cert(config.sigma, mu);
    if (as.p == "concentrated") {
      if (!mu.is_finite() || mu.coordinates().empty()) throw ConfigError("concentrated p needs an embedded finite mu");
      double center = 0.5;
      if (as.center) {
        center = *as.center;
      } else if (const auto* th = dynamic_cast<const ThresholdClass*>(cls.get())) {
        center = th->threshold(std::min(as.labels.hypothesis, th->size() - 1));
      }
      auto p = concentrated_measure(mu.probabilities(), mu.coordinates(), config.sigma, center);
      e.adversary = std::make_unique<IidAdversary>(std::move(cert), std::move(p), labels);
    } else {
      e.adversary = std::make_unique<IidAdversary>(std::move(cert), labels);
    }
  } else if (as.kind == "adaptive_mixture") {
    e.adversary = std::make_unique<AdaptiveMixtureAdversary>(SmoothnessCertificate(config.sigma, mu), labels);
  } else if (as.kind == "hidden_mu_threshold") {
    e.adversary = std::make_unique<HiddenMuThresholdAdversary>(config.sigma);
  } else {
    const auto& table = static_cast<const TableClass&>(*cls);
    auto adv = build_rademacher_gap_adversary(config.sigma, cs.shatter_m, table, cs.scale);
    mu = adv->certificate().base_measure;
    e.adversary = std::move(adv);
  }

  ClassPtr learner_cls = cls;
  if (cs.anchored) {
    if (!mu.is_finite()) throw ConfigError("anchored class needs a finite mu");
    learner_cls = std::make_shared<AnchoredClass>(cls, mu.size());
    mu = AnchoredClass::anchored_measure(mu);
  }
  e.mu = mu;

  OracleOptions oracle;
  oracle.seed = Rng(seed).split(3).next_u64();
  const auto& so = config.schedule;
  if (so.zeta) oracle.zeta = *so.zeta;

  if (config.learner == "relax-linear" || config.learner == "relax-general") {
    auto params = default_relax_params(config.horizon, config.sigma, e.loss.lipschitz());
    if (so.k) params.k = *so.k;
    if (so.delta) params.delta = *so.delta;
    const auto mode = config.learner == "relax-linear" ? RelaxMode::linear : RelaxMode::general;
    e.learner = std::make_unique<RelaxLearner>(mode, learner_cls, e.loss, e.mu, params, oracle);
  } else {
    const auto variant = config.learner == "ftpl-cls"    ? FtplVariant::classification
                         : config.learner == "ftpl-dual" ? FtplVariant::dual
                                                         : FtplVariant::single;
    if (variant == FtplVariant::classification && cls->kind() != ClassKind::binary) {
      throw ConfigError("ftpl-cls requires a binary class");
    }
    auto s = ftpl_schedule(config.horizon, config.sigma, e.loss.lipschitz(), so.p.value_or(1.0), variant);
    if (so.eta) s.eta = *so.eta;
    if (so.n) s.n = *so.n;
    if (so.m) s.m = *so.m;
    if (so.epsilon) s.epsilon = *so.epsilon;
    if (so.zeta) s.zeta = *so.zeta;
    e.learner = std::make_unique<FtplLearner>(learner_cls, e.loss, e.mu, s, oracle);
  }
  return e;
}

RegretTrace run_trajectory(Experiment& experiment, std::size_t horizon, std::uint64_t seed) {
  const Rng root(seed);
  const Rng adversary_stream = root.split(1);
  const Rng learner_stream = root.split(2);
  const auto [lo, hi] = experiment.loss.range();

  RegretTrace trace;
  trace.rounds.reserve(horizon);
  std::optional<double> last_prediction;
  std::uint64_t last_calls = 0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    Rng learner_rng = learner_stream.split(t);
    experiment.learner->begin_round(t, learner_rng);
    Rng adversary_rng = adversary_stream.split(t);
    const auto round = experiment.adversary->next_round(last_prediction, adversary_rng);

    const double yhat = experiment.learner->predict(round.context);
    if (!(yhat >= -1.0 && yhat <= 1.0)) throw InvariantViolation("prediction outside [-1, 1] at t=" + std::to_string(t));
    const double loss = experiment.loss(yhat, round.label);
    if (!(loss >= lo - 1e-12 && loss <= hi + 1e-12)) {
      throw InvariantViolation("instant loss outside the declared range at t=" + std::to_string(t));
    }
    experiment.learner->observe(round.context, round.label);

    const std::uint64_t calls = experiment.learner->oracle_calls();
    if (calls < last_calls) throw InvariantViolation("oracle call count decreased");
    last_calls = calls;

    RoundRecord rec;
    rec.t = t;
    rec.context = round.context;
    rec.label = round.label;
    rec.prediction = yhat;
    rec.hypothesis_index = experiment.learner->committed_hypothesis();
    rec.instant_loss = loss;
    rec.oracle_calls_so_far = calls;
    trace.rounds.push_back(std::move(rec));
    last_prediction = yhat;
  }
  return finalize_regret(std::move(trace), *experiment.cls, experiment.loss);
}

void write_trace_csv(const RegretTrace& trace, std::ostream& out) {
  out << "t,context,label,prediction,instant_loss,cumulative_regret,oracle_calls\n";
  for (const auto& r : trace.rounds) {
    out << r.t << ',' << r.context.to_string() << ',' << format_real(r.label) << ',' << format_real(r.prediction)
        << ',' << format_real(r.instant_loss) << ','
        << (r.cumulative_regret ? format_real(*r.cumulative_regret) : std::string()) << ','
        << r.oracle_calls_so_far << '\n';
  }
}

void aggregate(SummaryRecord& summary) {
  std::vector<double> finals;
  std::vector<double> calls;
  for (const auto& r : summary.runs) {
    finals.push_back(r.final_regret);
    calls.push_back(static_cast<double>(r.oracle_calls));
  }
  summary.mean_final_regret = mean(finals);
  summary.std_final_regret = sample_std(finals);
  summary.mean_oracle_calls = mean(calls);
}

std::string summary_to_json(const SummaryRecord& summary) {
  json runs = json::array();
  for (const auto& r : summary.runs) {
    json cps = json::object();
    for (const auto& [t, v] : r.checkpoints) cps[std::to_string(t)] = v;
    runs.push_back({{"seed", r.seed},
                    {"final_regret", r.final_regret},
                    {"checkpoints", cps},
                    {"oracle_calls", r.oracle_calls},
                    {"wall_time_s", r.wall_time_s},
                    {"learner_loss", r.learner_loss},
                    {"comparator_loss", r.comparator_loss}});
  }
  json doc{{"runs", runs},
           {"aggregate",
            {{"num_seeds", summary.runs.size()},
             {"mean_final_regret", summary.mean_final_regret},
             {"std_final_regret", summary.std_final_regret},
             {"mean_oracle_calls", summary.mean_oracle_calls}}}};
  return doc.dump(2);
}

SummaryRecord run_experiment(const ExperimentConfig& config) {
  SummaryRecord summary;
  summary.runs.resize(config.seeds.size());
  std::filesystem::path dir;
  if (!config.output.empty()) dir = ensure_dir(config.output);

  parallel_for(config.seeds.size(), config.threads, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    const auto start = std::chrono::steady_clock::now();
    Experiment e = build_experiment(config, seed);
    const RegretTrace trace = run_trajectory(e, config.horizon, seed);
    SeedSummary& s = summary.runs[i];
    s.seed = seed;
    s.wall_time_s = seconds_since(start);
    s.final_regret = *trace.cumulative_regret;
    s.oracle_calls = trace.rounds.back().oracle_calls_so_far;
    s.learner_loss = trace.learner_loss();
    s.comparator_loss = *trace.comparator_loss;
    for (std::size_t c : config.checkpoints) {
      if (c >= 1 && c <= trace.rounds.size()) s.checkpoints.emplace_back(c, *trace.rounds[c - 1].cumulative_regret);
    }
    if (!dir.empty()) {
      std::ofstream out(dir / ("trace_seed_" + std::to_string(seed) + ".csv"), std::ios::binary);
      write_trace_csv(trace, out);
    }
  });
  aggregate(summary);
  if (!dir.empty()) {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << summary_to_json(summary) << '\n';
  }
  return summary;
}

std::vector<SweepResult> sweep(const std::string& template_json, const std::string& param,
                               const std::vector<std::string>& values) {
  const json base = parse_json(template_json);
  std::string pointer = "/" + param;
  std::replace(pointer.begin(), pointer.end(), '.', '/');
  const json::json_pointer ptr(pointer);
  if (!base.contains(ptr)) throw ConfigError("parameter '" + param + "' is not in the template");
  const std::string root = base.value("output", std::string());

  std::vector<SweepResult> results;
  for (const auto& raw : values) {
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::exception&) {
      value = raw;
    }
    json doc = base;
    doc[ptr] = value;
    if (!root.empty()) doc["output"] = (std::filesystem::path(root) / (param + "=" + raw)).string();
    const auto config = parse_experiment_config(doc.dump());
    results.push_back({raw, run_experiment(config)});
  }
  if (!root.empty()) {
    std::ofstream out(ensure_dir(root) / "sweep.csv", std::ios::binary);
    out << "param,value,seed,final_regret,oracle_calls\n";
    for (const auto& r : results) {
      for (const auto& s : r.summary.runs) {
        out << param << ',' << r.value << ',' << s.seed << ',' << format_real(s.final_regret) << ','
            << s.oracle_calls << '\n';
      }
    }
  }
  return results;
}

BanditConfig parse_bandit_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j, "bandit config",
                      {"K", "contexts", "hypotheses", "sigma", "T", "gamma", "rademacher", "regressor", "table",
                       "table_seed", "comparator", "context_law", "center", "schedule", "seeds", "output",
                       "threads"});
  BanditConfig c;
  read(j, "K", c.num_actions);
  read(j, "contexts", c.num_contexts);
  read(j, "hypotheses", c.num_hypotheses);
  read(j, "sigma", c.sigma);
  read(j, "T", c.horizon);
  read(j, "gamma", c.gamma);
  read(j, "rademacher", c.rademacher);
  read(j, "regressor", c.regressor);
  read(j, "table", c.table);
  read(j, "table_seed", c.table_seed);
  read(j, "comparator", c.comparator);
  read(j, "context_law", c.contexts);
  read(j, "center", c.center);
  read(j, "seeds", c.seeds);
  read(j, "output", c.output);
  read(j, "threads", c.threads);
  if (j.contains("schedule")) c.schedule = parse_schedule(j.at("schedule"));

  require_one_of("regressor", c.regressor, {"relax-general", "ftpl-dual"});
  require_one_of("context law", c.contexts, {"mu", "concentrated"});
  if (c.num_actions < 1) throw ConfigError("K must be >= 1");
  if (c.horizon < 1) throw ConfigError("T must be >= 1");
  if (!(c.sigma > 0.0 && c.sigma <= 1.0)) throw ConfigError("sigma must lie in (0, 1]");
  if (c.seeds.empty()) throw ConfigError("seeds must be nonempty");
  if (c.gamma && !(*c.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (c.table.empty() && (c.num_contexts == 0 || c.num_hypotheses == 0)) {
    throw ConfigError("contexts and hypotheses must be positive");
  }
  const std::size_t F = c.table.empty() ? c.num_hypotheses : c.table.size();
  if (c.comparator >= F) throw ConfigError("comparator index out of range");
  return c;
}

BanditConfig load_bandit_config(const std::string& path) { return parse_bandit_config(read_file(path)); }

ActionTable resolve_table(const BanditConfig& config) {
  if (!config.table.empty()) return config.table;
  Rng rng(config.table_seed);
  return random_action_table(config.num_hypotheses, config.num_contexts, config.num_actions, 0.1, 0.9, rng);
}

double square_cb_bound(double reg_sq, double gamma, std::size_t num_actions, std::size_t horizon) {
  const double T = static_cast<double>(horizon);
  const double K = static_cast<double>(num_actions);
  const double log2t = std::log(2.0 * T);
  return gamma / 2.0 * reg_sq + 4.0 * gamma * log2t + 2.0 * K * T / gamma + std::sqrt(2.0 * T * log2t) + 1.0;
}

BanditResult run_bandit_seed(const BanditConfig& config, std::uint64_t seed) {
  const ActionTable table = resolve_table(config);
  const std::size_t N = table.at(0).size();
  const std::size_t K = table.at(0).at(0).size();

  const auto mu = ContextMeasure::finite(DiscreteMeasure::uniform(N));
  SmoothnessCertificate cert(config.sigma, mu);
  std::unique_ptr<SmoothAdversary> contexts;
  if (config.contexts == "concentrated") {
    auto p = concentrated_measure(mu.probabilities(), mu.coordinates(), config.sigma, config.center);
    contexts = std::make_unique<IidAdversary>(cert, std::move(p), LabelRule::rademacher());
  } else {
    contexts = std::make_unique<IidAdversary>(cert, LabelRule::rademacher());
  }

  const auto cls = make_product_class(table);
  const double joint_sigma = compose_smoothness(config.sigma, K);
  const auto joint_mu = product_measure(mu.probabilities(), K);
  const auto square = LossFunction::square();
  const auto& so = config.schedule;
  OracleOptions oracle;
  oracle.seed = Rng(seed).split(5).next_u64();
  if (so.zeta) oracle.zeta = *so.zeta;

  std::unique_ptr<OnlineLearner> regressor;
  if (config.regressor == "relax-general") {
    auto params = default_relax_params(config.horizon, joint_sigma, square.lipschitz());
    if (so.k) params.k = *so.k;
    if (so.delta) params.delta = *so.delta;
    regressor = std::make_unique<RelaxLearner>(RelaxMode::general, cls, square, joint_mu, params, oracle);
  } else {
    auto s = ftpl_schedule(config.horizon, joint_sigma, square.lipschitz(), so.p.value_or(1.0), FtplVariant::dual);
    if (so.eta) s.eta = *so.eta;
    if (so.n) s.n = *so.n;
    if (so.m) s.m = *so.m;
    if (so.epsilon) s.epsilon = *so.epsilon;
    if (so.zeta) s.zeta = *so.zeta;
    regressor = std::make_unique<FtplLearner>(cls, square, joint_mu, s, oracle);
  }

  const double rad = config.rademacher.value_or(rademacher_proxy(config.horizon, table.size()));
  const double gamma = config.gamma.value_or(default_gamma(config.horizon, config.sigma, 2.0, rad));
  return run_square_cb(*contexts, *regressor, table, config.comparator, gamma, config.horizon, Rng(seed));
}

std::vector<BanditSeedSummary> run_bandit(const BanditConfig& config) {
  std::vector<BanditSeedSummary> runs(config.seeds.size());
  std::filesystem::path dir;
  if (!config.output.empty()) dir = ensure_dir(config.output);
  const std::size_t K = resolve_table(config).at(0).at(0).size();

  parallel_for(config.seeds.size(), config.threads, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    const auto start = std::chrono::steady_clock::now();
    const BanditResult r = run_bandit_seed(config, seed);
    auto& s = runs[i];
    s.seed = seed;
    s.reg_cb = r.reg_cb;
    s.reg_cb_realized = r.reg_cb_realized;
    s.reg_sq = r.reg_sq;
    s.gamma = r.gamma;
    s.bound = square_cb_bound(r.reg_sq, r.gamma, K, config.horizon);
    s.oracle_calls = r.oracle_calls;
    s.clamp_warnings = r.clamp_warnings;
    s.wall_time_s = seconds_since(start);
    if (!dir.empty()) {
      std::ofstream out(dir / ("bandit_seed_" + std::to_string(seed) + ".csv"), std::ios::binary);
      out << "t,context,action,loss,action_probability,prediction,cumulative_reg_cb,oracle_calls\n";
      double cumulative = 0.0;
      const auto table = resolve_table(config);
      const auto& fstar = table[config.comparator];
      for (std::size_t k = 0; k < r.rounds.size(); ++k) {
        const auto& b = r.rounds[k];
        const auto& row = fstar[b.context];
        cumulative += row[b.action] - *std::min_element(row.begin(), row.end());
        out << b.t << ',' << b.context << ',' << b.action << ',' << format_real(b.loss) << ','
            << format_real(b.distribution[b.action]) << ',' << format_real(b.predictions[b.action]) << ','
            << format_real(cumulative) << ',' << r.square_trace.rounds[k].oracle_calls_so_far << '\n';
      }
    }
  });
  if (!dir.empty()) {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    out << bandit_summary_to_json(runs) << '\n';
  }
  return runs;
}

std::string bandit_summary_to_json(const std::vector<BanditSeedSummary>& runs) {
  json rows = json::array();
  std::vector<double> cb;
  std::vector<double> sq;
  for (const auto& s : runs) {
    rows.push_back({{"seed", s.seed},
                    {"reg_cb", s.reg_cb},
                    {"reg_cb_realized", s.reg_cb_realized},
                    {"reg_sq", s.reg_sq},
                    {"gamma", s.gamma},
                    {"bound", s.bound},
                    {"within_bound", s.reg_cb <= s.bound},
                    {"oracle_calls", s.oracle_calls},
                    {"clamp_warnings", s.clamp_warnings},
                    {"wall_time_s", s.wall_time_s}});
    cb.push_back(s.reg_cb);
    sq.push_back(s.reg_sq);
  }
  json doc{{"runs", rows},
           {"aggregate",
            {{"num_seeds", runs.size()},
             {"mean_reg_cb", mean(cb)},
             {"std_reg_cb", sample_std(cb)},
             {"mean_reg_sq", mean(sq)},
             {"std_reg_sq", sample_std(sq)}}}};
  return doc.dump(2);
}

std::string coupling_report_to_json(const CouplingReport& report) {
  json doc{{"x_marginal_pvalue", report.x_marginal_pvalue},
           {"z_marginal_pvalue", report.z_marginal_pvalue},
           {"miss_rate", report.miss_rate},
           {"bound", report.bound},
           {"loose_bound", report.loose_bound},
           {"trials", report.trials},
           {"misses", report.misses}};
  return doc.dump(2);
}

}  // namespace smoothol
