#include "swarm/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "swarm/engine.hpp"

namespace swarm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& body) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / name, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + name + " under '" + dir + "'");
  out << body;
}

}  // namespace

EnvironmentConfig experiment_environment(int green_count) {
  if (green_count < 0 || green_count > 6) {
    throw ConfigError("stock layout has 6 spots; green_count must be 0..6");
  }
  EnvironmentConfig env;
  env.arena_width = 3.0;
  env.arena_height = 3.0;
  env.charge_station = {0.1, 0.1};

  // Two rows of three spots; greens interleave across the rows.
  const double xs[3] = {0.6, 1.5, 2.4};
  const double ys[2] = {0.6, 2.4};
  for (double y : ys) {
    for (double x : xs) {
      env.spots.push_back({x, y, 0.3, 0});
    }
  }
  static constexpr int kGreenOrder[6] = {0, 3, 2, 5, 1, 4};
  for (int i = 0; i < green_count; ++i) {
    env.spots[static_cast<std::size_t>(kGreenOrder[i])].color = 1;
  }

  env.obstacles = {{0.5, 1.0, 0.2, 0.2}, {1.4, 1.0, 0.2, 0.2}, {2.3, 1.9, 0.2, 0.2}};
  return env;
}

SimConfig experiment_config(Method method, int green_count, std::uint64_t seed) {
  SimConfig cfg;
  cfg.environment = experiment_environment(green_count);
  cfg.method = method;
  cfg.worker_count = 10;
  cfg.seed = seed;
  switch (method) {
    case Method::kM1:
    case Method::kM2:
      break;
    case Method::kM3:
      cfg.chapar_count = 3;
      cfg.environment.stations = {
          {0.75, 1.5, 0.8}, {1.5, 1.5, 0.8}, {2.25, 1.5, 0.8}};
      break;
    case Method::kM4:
      cfg.chapar_count = 3;
      cfg.environment.stations = {{1.5, 1.5, 5.0}};
      break;
  }
  return cfg;
}

std::vector<Exp1Row> run_experiment1(std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ConfigError("experiment needs a non-empty seed list");
  std::vector<Exp1Row> rows;
  for (int env = 1; env <= 4; ++env) {
    const int greens = env + 2;  // 3, 4, 5, 6
    for (Method method : {Method::kM1, Method::kM2}) {
      for (std::uint64_t seed : seeds) {
        const RunResult result = run(experiment_config(method, greens, seed));
        Exp1Row row;
        row.env = env;
        row.method = method;
        row.seed = seed;
        row.successful = successful_before_threshold(result.log);
        row.green_discovered = green_spots_discovered(result.log);
        row.deployed_green = deployed_in_green(result.log);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<Exp2Row> run_experiment2(std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw ConfigError("experiment needs a non-empty seed list");
  std::vector<Exp2Row> rows;
  for (Method method :
       {Method::kM1, Method::kM2, Method::kM3, Method::kM4}) {
    for (std::uint64_t seed : seeds) {
      const RunResult result = run(experiment_config(method, 3, seed));
      rows.push_back({method, seed, absorption_percentage(result.log)});
    }
  }
  return rows;
}

void write_exp1_csv(const std::vector<Exp1Row>& rows, const std::string& dir) {
  std::ostringstream runs;
  runs << kCsvSchemaMarker << '\n';
  runs << "env,method,seed,successful,green_discovered,deployed_green\n";
  for (const auto& r : rows) {
    runs << r.env << ',' << method_name(r.method) << ',' << r.seed << ','
         << r.successful << ',' << r.green_discovered << ',' << r.deployed_green
         << '\n';
  }
  write_file(dir, "exp1_runs.csv", runs.str());

  std::ostringstream summary;
  summary << kCsvSchemaMarker << '\n';
  summary << "env,method,metric,mean,stddev,ci95,runs\n";
  for (int env = 1; env <= 4; ++env) {
    for (Method method : {Method::kM1, Method::kM2}) {
      std::vector<double> successful, discovered, deployed;
      for (const auto& r : rows) {
        if (r.env != env || r.method != method) continue;
        successful.push_back(r.successful);
        discovered.push_back(r.green_discovered);
        deployed.push_back(r.deployed_green);
      }
      const struct {
        const char* name;
        const std::vector<double>* values;
      } metrics[] = {{"successful", &successful},
                     {"green_discovered", &discovered},
                     {"deployed_green", &deployed}};
      for (const auto& metric : metrics) {
        const Stats s = aggregate(*metric.values);
        summary << env << ',' << method_name(method) << ',' << metric.name << ','
                << fmt(s.mean) << ',' << fmt(s.stddev) << ',' << fmt(s.ci95) << ','
                << s.n << '\n';
      }
    }
  }
  write_file(dir, "exp1_summary.csv", summary.str());
}

void write_exp2_csv(const std::vector<Exp2Row>& rows, const std::string& dir) {
  std::ostringstream runs;
  runs << kCsvSchemaMarker << '\n';
  runs << "method,seed,absorption\n";
  for (const auto& r : rows) {
    runs << method_name(r.method) << ',' << r.seed << ',' << fmt(r.absorption)
         << '\n';
  }
  write_file(dir, "exp2_runs.csv", runs.str());

  std::ostringstream summary;
  summary << kCsvSchemaMarker << '\n';
  summary << "method,mean,stddev,ci95,runs\n";
  for (Method method : {Method::kM1, Method::kM2, Method::kM3, Method::kM4}) {
    std::vector<double> values;
    for (const auto& r : rows) {
      if (r.method == method) values.push_back(r.absorption);
    }
    const Stats s = aggregate(values);
    summary << method_name(method) << ',' << fmt(s.mean) << ',' << fmt(s.stddev)
            << ',' << fmt(s.ci95) << ',' << s.n << '\n';
  }
  write_file(dir, "exp2_summary.csv", summary.str());
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();

  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }

  Scenario sc;
  sc.name = j.value("name", std::string("scenario"));
  if (!j.contains("config")) throw ConfigError("scenario needs a 'config' object");
  sc.config = parse_config(j["config"].dump());
  for (const auto& s : j.value("seeds", json::array())) {
    sc.seeds.push_back(s.get<std::uint64_t>());
  }
  if (sc.seeds.empty()) throw ConfigError("scenario needs a non-empty seed list");
  if (sc.config.failure_events.empty()) {
    throw ConfigError("scenario config carries no failure_events");
  }
  return sc;
}

std::vector<RobustnessRow> run_scenario(const Scenario& sc) {
  std::vector<RobustnessRow> rows;
  SimConfig baseline = sc.config;
  baseline.failure_events.clear();
  for (std::uint64_t seed : sc.seeds) {
    SimConfig with_failure = sc.config;
    with_failure.seed = seed;
    SimConfig without = baseline;
    without.seed = seed;
    const double failure = absorption_percentage(run(with_failure).log);
    const double base = absorption_percentage(run(without).log);
    rows.push_back({seed, failure, base});
  }
  return rows;
}

void write_robustness_csv(const Scenario& sc, const std::vector<RobustnessRow>& rows,
                          const std::string& dir) {
  std::ostringstream out;
  out << kCsvSchemaMarker << '\n';
  out << "seed,absorption_failure,absorption_baseline,delta\n";
  for (const auto& r : rows) {
    out << r.seed << ',' << fmt(r.absorption_failure) << ','
        << fmt(r.absorption_baseline) << ','
        << fmt(r.absorption_failure - r.absorption_baseline) << '\n';
  }
  write_file(dir, "robustness_" + sc.name + ".csv", out.str());
}

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kCsvSchemaMarker) {
    throw ConfigError("'" + path.string() +
                      "' does not carry the expected schema marker (" +
                      kCsvSchemaMarker + ")");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

void report(const std::string& in_dir, const std::string& out_dir) {
  const fs::path exp1 = fs::path(in_dir) / "exp1_runs.csv";
  const fs::path exp2 = fs::path(in_dir) / "exp2_runs.csv";
  bool produced = false;

  if (fs::exists(exp1)) {
    auto rows = read_csv(exp1);
    if (rows.empty() ||
        rows[0] != std::vector<std::string>{"env", "method", "seed", "successful",
                                            "green_discovered", "deployed_green"}) {
      throw ConfigError("unexpected columns in '" + exp1.string() + "'");
    }
    // metric -> env -> method -> values
    std::map<std::string, std::map<int, std::map<std::string, std::vector<double>>>>
        by_metric;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& r = rows[i];
      const int env = std::stoi(r[0]);
      by_metric["successful"][env][r[1]].push_back(std::stod(r[3]));
      by_metric["discovered"][env][r[1]].push_back(std::stod(r[4]));
      by_metric["deployed"][env][r[1]].push_back(std::stod(r[5]));
    }
    for (const auto& [metric, envs] : by_metric) {
      std::ostringstream series;
      series << kCsvSchemaMarker << '\n';
      series << "env,m1,m2\n";
      for (const auto& [env, methods] : envs) {
        const auto m1 = methods.find("m1");
        const auto m2 = methods.find("m2");
        series << env << ','
               << fmt(m1 == methods.end() ? 0.0 : aggregate(m1->second).mean) << ','
               << fmt(m2 == methods.end() ? 0.0 : aggregate(m2->second).mean)
               << '\n';
      }
      write_file(out_dir, "series_" + metric + ".csv", series.str());
    }
    produced = true;
  }

  if (fs::exists(exp2)) {
    auto rows = read_csv(exp2);
    if (rows.empty() ||
        rows[0] != std::vector<std::string>{"method", "seed", "absorption"}) {
      throw ConfigError("unexpected columns in '" + exp2.string() + "'");
    }
    std::map<std::string, std::vector<double>> by_method;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      by_method[rows[i][0]].push_back(std::stod(rows[i][2]));
    }
    std::ostringstream table;
    table << kCsvSchemaMarker << '\n';
    table << "method,absorption\n";
    for (const char* m : {"m1", "m2", "m3", "m4"}) {
      const auto it = by_method.find(m);
      table << m << ',' << fmt(it == by_method.end() ? 0.0 : aggregate(it->second).mean)
            << '\n';
    }
    write_file(out_dir, "exp2_table.csv", table.str());
    produced = true;
  }

  if (!produced) {
    throw ConfigError("no exp1_runs.csv or exp2_runs.csv under '" + in_dir + "'");
  }
}

}  // namespace swarm
