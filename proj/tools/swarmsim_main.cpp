#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swarm/engine.hpp"
#include "swarm/experiments.hpp"
#include "swarm/metrics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitInvariantAbort = 2;

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  if (spec.find(',') == std::string::npos) {
    const long long n = std::stoll(spec);
    if (n < 1) throw swarm::ConfigError("seed count must be >= 1");
    for (long long i = 1; i <= n; ++i) {
      seeds.push_back(static_cast<std::uint64_t>(i));
    }
    return seeds;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw swarm::ConfigError("empty seed list");
  return seeds;
}

int run_command(const std::string& config_path, std::int64_t seed_override,
                const std::string& log_path) {
  swarm::SimConfig cfg = swarm::load_config_file(config_path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (!log_path.empty()) cfg.log_frames = true;  // full network trace on disk

  const swarm::RunResult result = swarm::run(cfg);

  if (!log_path.empty()) {
    std::ofstream out(log_path, std::ios::binary);
    if (!out) throw swarm::ConfigError("cannot write log file '" + log_path + "'");
    swarm::write_jsonl(result.log, cfg, out);
  }

  int deploys = 0;
  for (const auto& e : result.log.events) {
    if (e.kind == swarm::EventKind::kDeploy) ++deploys;
  }
  std::cout << "end_tick=" << result.end_tick
            << " quiescent=" << (result.reached_quiescence ? "yes" : "no")
            << " deploys=" << deploys
            << " absorption=" << swarm::absorption_percentage(result.log) << "%\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarmsim - swarm task-allocation simulator"};
  app.require_subcommand(1);

  std::string config_path, log_path, seeds_spec = "30", out_dir, in_dir,
              scenario_path;
  std::int64_t seed_override = -1;
  bool paper_mode = false;

  auto* run_cmd = app.add_subcommand("run", "single simulation run");
  run_cmd->add_option("--config", config_path, "config JSON file")->required();
  run_cmd->add_option("--seed", seed_override, "override the config seed");
  run_cmd->add_option("--log", log_path, "write the event log (JSON lines)");

  auto* exp1_cmd = app.add_subcommand("exp1", "pre-threshold comparison of m1/m2");
  exp1_cmd->add_option("--seeds", seeds_spec, "seed count or comma list");
  exp1_cmd->add_option("--out", out_dir, "output directory")->required();
  exp1_cmd->add_flag("--paper-mode", paper_mode, "use 10 seeds");

  auto* exp2_cmd = app.add_subcommand("exp2", "post-threshold absorption of m1-m4");
  exp2_cmd->add_option("--seeds", seeds_spec, "seed count or comma list");
  exp2_cmd->add_option("--out", out_dir, "output directory")->required();
  exp2_cmd->add_flag("--paper-mode", paper_mode, "use 10 seeds");

  auto* rob_cmd = app.add_subcommand("robustness", "failure-injection scenario");
  rob_cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  rob_cmd->add_option("--out", out_dir, "output directory")->required();

  auto* report_cmd = app.add_subcommand("report", "summaries and plot series");
  report_cmd->add_option("--in", in_dir, "directory with run CSVs")->required();
  report_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return run_command(config_path, seed_override, log_path);
    }
    if (exp1_cmd->parsed() || exp2_cmd->parsed()) {
      const auto seeds = parse_seeds(paper_mode ? "10" : seeds_spec);
      if (exp1_cmd->parsed()) {
        swarm::write_exp1_csv(swarm::run_experiment1(seeds), out_dir);
        std::cout << "wrote exp1_runs.csv and exp1_summary.csv to " << out_dir
                  << "\n";
      } else {
        swarm::write_exp2_csv(swarm::run_experiment2(seeds), out_dir);
        std::cout << "wrote exp2_runs.csv and exp2_summary.csv to " << out_dir
                  << "\n";
      }
      return kExitOk;
    }
    if (rob_cmd->parsed()) {
      const swarm::Scenario sc = swarm::load_scenario(scenario_path);
      swarm::write_robustness_csv(sc, swarm::run_scenario(sc), out_dir);
      std::cout << "wrote robustness_" << sc.name << ".csv to " << out_dir << "\n";
      return kExitOk;
    }
    if (report_cmd->parsed()) {
      swarm::report(in_dir, out_dir);
      std::cout << "wrote report files to " << out_dir << "\n";
      return kExitOk;
    }
  } catch (const swarm::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const swarm::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariantAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariantAbort;
  }
  return kExitOk;
}
