#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/metrics.hpp"

namespace swarm {

// Stock 3m x 3m layout: six 0.3 m spots in two rows, three small obstacles,
// charger in the corner. green_count of the six spots are green, interleaved
// across the rows so neither color clusters.
EnvironmentConfig experiment_environment(int green_count);

// Per-method setup on the stock layout: m1/m2 run 10 workers; m3 adds 3
// couriers and a 3-station chain across the middle; m4 adds 3 couriers and a
// single arena-covering station.
SimConfig experiment_config(Method method, int green_count, std::uint64_t seed);

struct Exp1Row {
  int env = 0;  // 1..4 = 3,4,5,6 green spots
  Method method = Method::kM1;
  std::uint64_t seed = 0;
  int successful = 0;
  int green_discovered = 0;
  int deployed_green = 0;
};

struct Exp2Row {
  Method method = Method::kM1;
  std::uint64_t seed = 0;
  double absorption = 0.0;
};

// First experiment: methods m1/m2 on the four environments, pre-threshold
// metrics per run. Throws ConfigError on an empty seed list.
std::vector<Exp1Row> run_experiment1(std::span<const std::uint64_t> seeds);

// Second experiment: absorption per method on the 3-green/3-black layout.
std::vector<Exp2Row> run_experiment2(std::span<const std::uint64_t> seeds);

void write_exp1_csv(const std::vector<Exp1Row>& rows, const std::string& dir);
void write_exp2_csv(const std::vector<Exp2Row>& rows, const std::string& dir);

// Robustness scenario: a config run with its failure events and once more
// without them, absorption compared per seed.
struct RobustnessRow {
  std::uint64_t seed = 0;
  double absorption_failure = 0.0;
  double absorption_baseline = 0.0;
};

struct Scenario {
  std::string name;
  SimConfig config;
  std::vector<std::uint64_t> seeds;
};

Scenario load_scenario(const std::string& path);
std::vector<RobustnessRow> run_scenario(const Scenario& sc);
void write_robustness_csv(const Scenario& sc, const std::vector<RobustnessRow>& rows,
                          const std::string& dir);

// Build summary tables and plot series from run CSVs in `in_dir`:
// series_successful/discovered/deployed.csv (env, m1, m2) from experiment 1
// and exp2_table.csv (method, absorption) from experiment 2. Inputs must
// carry this harness's schema marker; a mismatch throws ConfigError.
void report(const std::string& in_dir, const std::string& out_dir);

inline constexpr const char* kCsvSchemaMarker = "# swarmsim_csv schema_version=1";

}  // namespace swarm
