// Experiment runner: simulate-halfspace, simulate-bandit, verify, baseline.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "massart.hpp"

namespace fs = std::filesystem;
using massart::Json;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kOracleFailure = 3, kEnvironmentViolation = 4 };

struct CommonOptions {
  std::string config_path;
  std::size_t seeds = 1;
  std::string out_dir;
};

constexpr const char* kKeys[] = {"d",     "t_horizon", "eta",  "gamma",     "zeta",        "k",
                                 "delta", "reward_cap", "seed", "adversary", "environment",
                                 "domain_radius"};

void add_common(CLI::App* cmd, CommonOptions& opts, std::map<std::string, std::string>& raw) {
  cmd->add_option("--config", opts.config_path, "flat key = value config file");
  cmd->add_option("--seeds", opts.seeds, "number of consecutive seeds to run")->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out_dir, "directory for run_<seed>.csv and report.json");
  for (const char* key : kKeys) cmd->add_option(std::string("--") + key, raw[key]);
}

massart::Settings load_settings(const CommonOptions& opts, const std::map<std::string, std::string>& raw) {
  massart::Settings s;
  if (!opts.config_path.empty()) massart::apply_settings_file(s, opts.config_path);
  for (const char* key : kKeys) {
    const auto it = raw.find(key);
    if (it != raw.end() && !it->second.empty()) massart::apply_setting(s, key, it->second);
  }
  return s;
}

void emit(const CommonOptions& opts, const Json& report) {
  if (opts.out_dir.empty()) {
    std::cout << report.dump(2) << '\n';
    return;
  }
  std::ofstream out(fs::path(opts.out_dir) / "report.json");
  out << report.dump(2) << '\n';
}

void write_trace(const CommonOptions& opts, std::uint64_t seed,
                 const std::vector<massart::RoundRecord>& records) {
  std::ofstream out(fs::path(opts.out_dir) / ("run_" + std::to_string(seed) + ".csv"));
  massart::write_csv(out, records);
}

int simulate_halfspace(const CommonOptions& opts, const massart::Settings& s) {
  const massart::HalfspaceConfig base = s.halfspace();
  const bool traces = !opts.out_dir.empty();
  if (traces) fs::create_directories(opts.out_dir);
  auto runs = massart::run_seeds<massart::HalfspaceRun>(base.seed, opts.seeds, [&](std::uint64_t seed) {
    massart::HalfspaceConfig c = base;
    c.seed = seed;
    return massart::run_halfspace_experiment(c, traces);
  });
  Json per_seed = Json::array();
  double rate = 0.0, excess = 0.0;
  for (const auto& run : runs) {
    if (traces) write_trace(opts, run.config.seed, run.records);
    per_seed.push_back(massart::report_json(run));
    rate += run.mistake_rate() / static_cast<double>(runs.size());
    excess += run.normalized_excess() / static_cast<double>(runs.size());
  }
  emit(opts, Json{{"command", "simulate-halfspace"},
                  {"runs", per_seed},
                  {"aggregate", {{"seeds", runs.size()}, {"mean_mistake_rate", rate}, {"mean_normalized_excess", excess}}}});
  return kOk;
}

int simulate_bandit(const CommonOptions& opts, const massart::Settings& s) {
  const massart::BanditConfig base = s.bandit();
  const bool traces = !opts.out_dir.empty();
  if (traces) fs::create_directories(opts.out_dir);
  auto runs = massart::run_seeds<massart::BanditRun>(base.seed, opts.seeds, [&](std::uint64_t seed) {
    massart::BanditConfig c = base;
    c.seed = seed;
    return massart::run_bandit_experiment(c, traces);
  });
  Json per_seed = Json::array();
  double gain = 0.0, reward = 0.0;
  for (const auto& run : runs) {
    if (traces) write_trace(opts, run.config.seed, run.records);
    per_seed.push_back(massart::report_json(run));
    gain += run.gain() / static_cast<double>(runs.size());
    reward += run.reward / static_cast<double>(runs.size());
  }
  emit(opts, Json{{"command", "simulate-bandit"},
                  {"runs", per_seed},
                  {"aggregate", {{"seeds", runs.size()}, {"mean_reward", reward}, {"mean_gain_vs_uniform", gain}}}});
  return kOk;
}

int baseline(const CommonOptions& opts, const massart::Settings& s) {
  const massart::HalfspaceConfig base = s.halfspace();
  if (!opts.out_dir.empty()) fs::create_directories(opts.out_dir);
  auto runs = massart::run_seeds<massart::HalfspaceRun>(base.seed, opts.seeds, [&](std::uint64_t seed) {
    massart::HalfspaceConfig c = base;
    c.seed = seed;
    return massart::run_halfspace_experiment(c, false);
  });
  Json per_seed = Json::array();
  for (const auto& run : runs) {
    per_seed.push_back({{"seed", run.config.seed},
                        {"t_horizon", run.config.horizon},
                        {"learner", run.mistakes},
                        {"random_play", run.random_play_mistakes},
                        {"perceptron", run.perceptron_mistakes}});
  }
  emit(opts, Json{{"command", "baseline"}, {"runs", per_seed}});
  return kOk;
}

int verify(const CommonOptions& opts, const massart::Settings& s, std::optional<double> tau,
           bool corrupt_fake_rewards) {
  massart::OracleOptions oracle;
  oracle.seed = s.seed;
  oracle.tau = tau;
  if (corrupt_fake_rewards) {
    oracle.fake_rewards = [](std::size_t k, double m, std::size_t beta, double r) {
      massart::Vector out(k, m - r);
      out[beta] = static_cast<double>(k) * r;  // off by one on (k - 1)
      return out;
    };
  }
  massart::Settings bandit_settings = s;
  if (bandit_settings.environment == massart::EnvironmentKind::Massart2) bandit_settings.environment.reset();
  const massart::OracleReport report = massart::verify_oracles(s.halfspace(), bandit_settings.bandit(), oracle);
  for (const auto& c : report.checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
  }
  if (!opts.out_dir.empty()) fs::create_directories(opts.out_dir);
  emit(opts, report.to_json());
  return report.all_passed() ? kOk : kOracleFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online Massart halfspace and monotone-reward bandit experiments"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::map<std::string, std::string> raw;
  std::optional<double> tau;
  bool corrupt = false;

  auto* halfspace = app.add_subcommand("simulate-halfspace", "run the halfspace learner");
  auto* bandit = app.add_subcommand("simulate-bandit", "run the contextual bandit learner");
  auto* verify_cmd = app.add_subcommand("verify", "run the oracle verification suite");
  auto* baseline_cmd = app.add_subcommand("baseline", "learner vs perceptron and random play");
  for (auto* cmd : {halfspace, bandit, verify_cmd, baseline_cmd}) add_common(cmd, opts, raw);
  verify_cmd->add_option("--tau", tau, "override tau in the reweighted-loss checks");
  verify_cmd->add_flag("--corrupt-fake-rewards", corrupt, "mutation check: break the debiasing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    const massart::Settings settings = load_settings(opts, raw);
    if (halfspace->parsed()) return simulate_halfspace(opts, settings);
    if (bandit->parsed()) return simulate_bandit(opts, settings);
    if (verify_cmd->parsed()) return verify(opts, settings, tau, corrupt);
    return baseline(opts, settings);
  } catch (const massart::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const massart::EnvironmentViolation& e) {
    std::cerr << "environment invariant violated: " << e.what() << '\n';
    return kEnvironmentViolation;
  }
}
