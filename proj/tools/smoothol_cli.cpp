// smoothol: run, sweep, couple-test, bandit.
// Exit codes: 0 ok, 2 bad config or arguments, 3 invariant violated mid-run, 1 anything else.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smoothol/coupling.hpp"
#include "smoothol/errors.hpp"
#include "smoothol/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw smoothol::ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw smoothol::ConfigError("--values is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoothed online learning experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment config over its seeds");
  run->add_option("--config", config_path, "JSON config")->required();

  std::string param, values;
  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over values of one config key");
  sweep->add_option("--config", config_path, "JSON template config")->required();
  sweep->add_option("--param", param, "key, dotted for nested (schedule.eta)")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();

  double sigma = 0.5;
  std::size_t k = 1, atoms = 10;
  std::uint64_t trials = 100000, seed = 0;
  auto* couple = app.add_subcommand("couple-test", "Validate the coupling on the extreme sigma-smooth law");
  couple->add_option("--sigma", sigma)->required();
  couple->add_option("--k", k)->required();
  couple->add_option("--trials", trials)->required();
  couple->add_option("--atoms", atoms, "size of the uniform base measure")->capture_default_str();
  couple->add_option("--seed", seed)->capture_default_str();

  auto* bandit = app.add_subcommand("bandit", "SquareCB over an online regressor");
  bandit->add_option("--config", config_path, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) {
      const auto config = smoothol::load_experiment_config(config_path);
      std::cout << smoothol::summary_to_json(smoothol::run_experiment(config)) << "\n";
    } else if (*sweep) {
      const auto results = smoothol::sweep(read_file(config_path), param, split_csv(values));
      std::printf("%-16s %14s %14s %14s\n", param.c_str(), "mean_regret", "std_regret", "mean_calls");
      for (const auto& r : results) {
        std::printf("%-16s %14.6f %14.6f %14.1f\n", r.value.c_str(), r.summary.mean_final_regret,
                    r.summary.std_final_regret, r.summary.mean_oracle_calls);
      }
    } else if (*couple) {
      if (!(sigma > 0.0 && sigma <= 1.0)) throw smoothol::ConfigError("sigma must lie in (0, 1]");
      const double m = sigma * static_cast<double>(atoms);
      if (std::abs(m - std::round(m)) > 1e-9 || m < 1.0) {
        throw smoothol::ConfigError("sigma * atoms must be a positive integer");
      }
      if (trials < 1000) throw smoothol::ConfigError("--trials must be >= 1000");
      const auto cfg = smoothol::concentrated_coupling_config(sigma, k, atoms, seed);
      std::cout << smoothol::coupling_report_to_json(smoothol::validate_coupling(cfg, trials)) << "\n";
    } else if (*bandit) {
      const auto config = smoothol::load_bandit_config(config_path);
      std::cout << smoothol::bandit_summary_to_json(smoothol::run_bandit(config)) << "\n";
    }
  } catch (const smoothol::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const smoothol::InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
