#include "swarm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "swarm/world.hpp"

namespace swarm {

using nlohmann::json;

const char* method_name(Method m) {
  switch (m) {
    case Method::kM1: return "m1";
    case Method::kM2: return "m2";
    case Method::kM3: return "m3";
    case Method::kM4: return "m4";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "m1") return Method::kM1;
  if (s == "m2") return Method::kM2;
  if (s == "m3") return Method::kM3;
  if (s == "m4") return Method::kM4;
  throw ConfigError("unknown method '" + s + "' (expected m1|m2|m3|m4)");
}

TargetPolicy effective_policy(const SimConfig& cfg) {
  switch (cfg.method) {
    case Method::kM1: return TargetPolicy::kStatic;
    case Method::kM2: return TargetPolicy::kDynamic;
    default: return cfg.worker_policy;
  }
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where,
                         std::vector<std::string>& issues) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      issues.push_back("unknown key '" + key + "' in " + where);
    }
  }
}

EnvironmentConfig parse_environment(const json& j, std::vector<std::string>& issues) {
  EnvironmentConfig env;
  reject_unknown_keys(j,
                      {"arena", "spots", "obstacles", "stations", "charge_station"},
                      "environment", issues);
  if (j.contains("arena")) {
    env.arena_width = j["arena"].value("width", env.arena_width);
    env.arena_height = j["arena"].value("height", env.arena_height);
  }
  for (const auto& s : j.value("spots", json::array())) {
    SpotConfig sc;
    sc.cx = s.at("cx").get<double>();
    sc.cy = s.at("cy").get<double>();
    sc.side = s.value("side", 0.3);
    sc.color = s.at("color").get<int>();
    env.spots.push_back(sc);
  }
  for (const auto& o : j.value("obstacles", json::array())) {
    env.obstacles.push_back({o.at("x").get<double>(), o.at("y").get<double>(),
                             o.at("w").get<double>(), o.at("h").get<double>()});
  }
  for (const auto& st : j.value("stations", json::array())) {
    env.stations.push_back({st.at("x").get<double>(), st.at("y").get<double>(),
                            st.at("radius").get<double>()});
  }
  if (j.contains("charge_station")) {
    env.charge_station = {j["charge_station"].at("x").get<double>(),
                          j["charge_station"].at("y").get<double>()};
  }
  return env;
}

FailureEvent parse_failure(const json& j) {
  FailureEvent ev;
  ev.at_tick = j.at("at_tick").get<Tick>();
  const std::string target = j.at("target").get<std::string>();
  if (target == "robot") {
    ev.target = FailureEvent::Target::kRobot;
  } else if (target == "station") {
    ev.target = FailureEvent::Target::kStation;
  } else {
    throw ConfigError("failure target must be 'robot' or 'station', got '" +
                      target + "'");
  }
  ev.id = j.at("id").get<int>();
  return ev;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  std::vector<std::string> issues;
  static const std::set<std::string> kTopKeys = {
      "schema_version", "environment", "method", "worker_count", "chapar_count",
      "budgets", "speeds", "radii", "flood_period", "chapar_flood_period",
      "resample_period", "sync_period", "bucket_size", "retry_threshold",
      "recharge_ticks", "dwell_ticks", "sensor_range", "wire_slots", "max_ticks",
      "seed", "assignment", "worker_policy", "stop_on_quiescence", "log_frames",
      "failure_events"};
  reject_unknown_keys(j, kTopKeys, "config", issues);

  SimConfig cfg;
  try {
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1) {
      issues.push_back("unsupported schema_version " +
                       std::to_string(cfg.schema_version));
    }
    if (j.contains("environment")) {
      cfg.environment = parse_environment(j["environment"], issues);
    }
    if (j.contains("method")) {
      cfg.method = method_from_string(j["method"].get<std::string>());
    }
    cfg.worker_count = j.value("worker_count", cfg.worker_count);
    cfg.chapar_count = j.value("chapar_count", cfg.chapar_count);
    if (j.contains("budgets")) {
      const auto& b = j["budgets"];
      cfg.forage_budget = b.value("forage", cfg.forage_budget);
      cfg.work_budget = b.value("work", cfg.work_budget);
      cfg.return_budget = b.value("return", cfg.return_budget);
    }
    if (j.contains("speeds")) {
      const auto& s = j["speeds"];
      cfg.worker_speed = s.value("worker", cfg.worker_speed);
      cfg.chapar_speed = s.value("chapar", cfg.chapar_speed);
    }
    if (j.contains("radii")) {
      const auto& r = j["radii"];
      cfg.worker_radio = r.value("worker_radio", cfg.worker_radio);
      cfg.chapar_radio = r.value("chapar_radio", cfg.chapar_radio);
    }
    cfg.flood_period = j.value("flood_period", cfg.flood_period);
    cfg.chapar_flood_period = j.value("chapar_flood_period", cfg.chapar_flood_period);
    cfg.resample_period = j.value("resample_period", cfg.resample_period);
    cfg.sync_period = j.value("sync_period", cfg.sync_period);
    cfg.bucket_size = j.value("bucket_size", cfg.bucket_size);
    cfg.retry_threshold = j.value("retry_threshold", cfg.retry_threshold);
    cfg.recharge_ticks = j.value("recharge_ticks", cfg.recharge_ticks);
    cfg.dwell_ticks = j.value("dwell_ticks", cfg.dwell_ticks);
    cfg.sensor_range = j.value("sensor_range", cfg.sensor_range);
    cfg.wire_slots = j.value("wire_slots", cfg.wire_slots);
    cfg.max_ticks = j.value("max_ticks", cfg.max_ticks);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("assignment")) {
      const std::string a = j["assignment"].get<std::string>();
      if (a == "split") {
        cfg.assignment = TargetAssignment::kSplit;
      } else if (a == "random") {
        cfg.assignment = TargetAssignment::kRandom;
      } else {
        issues.push_back("assignment must be 'split' or 'random', got '" + a + "'");
      }
    }
    if (j.contains("worker_policy")) {
      const std::string p = j["worker_policy"].get<std::string>();
      if (p == "static") {
        cfg.worker_policy = TargetPolicy::kStatic;
      } else if (p == "dynamic") {
        cfg.worker_policy = TargetPolicy::kDynamic;
      } else {
        issues.push_back("worker_policy must be 'static' or 'dynamic', got '" + p +
                         "'");
      }
    }
    cfg.stop_on_quiescence = j.value("stop_on_quiescence", cfg.stop_on_quiescence);
    cfg.log_frames = j.value("log_frames", cfg.log_frames);
    for (const auto& f : j.value("failure_events", json::array())) {
      cfg.failure_events.push_back(parse_failure(f));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    issues.push_back(std::string("malformed value: ") + e.what());
  }

  if (!issues.empty()) throw ConfigError(issues);
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const SimConfig& cfg) {
  json env;
  env["arena"] = {{"width", cfg.environment.arena_width},
                  {"height", cfg.environment.arena_height}};
  env["spots"] = json::array();
  for (const auto& s : cfg.environment.spots) {
    env["spots"].push_back(
        {{"cx", s.cx}, {"cy", s.cy}, {"side", s.side}, {"color", s.color}});
  }
  env["obstacles"] = json::array();
  for (const auto& o : cfg.environment.obstacles) {
    env["obstacles"].push_back({{"x", o.x}, {"y", o.y}, {"w", o.w}, {"h", o.h}});
  }
  env["stations"] = json::array();
  for (const auto& st : cfg.environment.stations) {
    env["stations"].push_back(
        {{"x", st.x}, {"y", st.y}, {"radius", st.radius}});
  }
  env["charge_station"] = {{"x", cfg.environment.charge_station.x},
                           {"y", cfg.environment.charge_station.y}};

  json j;
  j["schema_version"] = cfg.schema_version;
  j["environment"] = env;
  j["method"] = method_name(cfg.method);
  j["worker_count"] = cfg.worker_count;
  j["chapar_count"] = cfg.chapar_count;
  j["budgets"] = {{"forage", cfg.forage_budget},
                  {"work", cfg.work_budget},
                  {"return", cfg.return_budget}};
  j["speeds"] = {{"worker", cfg.worker_speed}, {"chapar", cfg.chapar_speed}};
  j["radii"] = {{"worker_radio", cfg.worker_radio},
                {"chapar_radio", cfg.chapar_radio}};
  j["flood_period"] = cfg.flood_period;
  j["chapar_flood_period"] = cfg.chapar_flood_period;
  j["resample_period"] = cfg.resample_period;
  j["sync_period"] = cfg.sync_period;
  j["bucket_size"] = cfg.bucket_size;
  j["retry_threshold"] = cfg.retry_threshold;
  j["recharge_ticks"] = cfg.recharge_ticks;
  j["dwell_ticks"] = cfg.dwell_ticks;
  j["sensor_range"] = cfg.sensor_range;
  j["wire_slots"] = cfg.wire_slots;
  j["max_ticks"] = cfg.max_ticks;
  j["seed"] = cfg.seed;
  j["assignment"] =
      cfg.assignment == TargetAssignment::kSplit ? "split" : "random";
  j["worker_policy"] =
      cfg.worker_policy == TargetPolicy::kStatic ? "static" : "dynamic";
  j["stop_on_quiescence"] = cfg.stop_on_quiescence;
  j["log_frames"] = cfg.log_frames;
  j["failure_events"] = json::array();
  for (const auto& f : cfg.failure_events) {
    j["failure_events"].push_back(
        {{"at_tick", f.at_tick},
         {"target", f.target == FailureEvent::Target::kRobot ? "robot" : "station"},
         {"id", f.id}});
  }
  return j.dump(2);
}

namespace {

bool rects_overlap(const Rect& a, const Rect& b) {
  return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

Rect spot_rect(const SpotConfig& s) {
  return {s.cx - s.side / 2.0, s.cy - s.side / 2.0, s.side, s.side};
}

}  // namespace

void validate(const SimConfig& cfg) {
  std::vector<std::string> issues;
  const auto& env = cfg.environment;

  if (env.arena_width <= 0 || env.arena_height <= 0) {
    issues.push_back("arena dimensions must be positive");
  }
  if (cfg.worker_count < 1) issues.push_back("worker_count must be >= 1");
  if (cfg.chapar_count < 0) issues.push_back("chapar_count must be >= 0");
  if (cfg.forage_budget < 1 || cfg.work_budget < 1 || cfg.return_budget < 1) {
    issues.push_back("all energy budgets must be >= 1");
  }
  if (cfg.worker_speed <= 0) issues.push_back("worker_speed must be positive");
  if (cfg.chapar_count > 0 && cfg.chapar_speed <= cfg.worker_speed) {
    issues.push_back("chapar_speed must strictly exceed worker_speed");
  }
  if (cfg.worker_radio <= 0 || cfg.chapar_radio <= 0) {
    issues.push_back("radio radii must be positive");
  }
  if (cfg.flood_period < 1) issues.push_back("flood_period must be >= 1");
  if (cfg.chapar_flood_period < 1) {
    issues.push_back("chapar_flood_period must be >= 1");
  }
  if (cfg.resample_period < 1) issues.push_back("resample_period must be >= 1");
  if (cfg.sync_period < 1) issues.push_back("sync_period must be >= 1");
  if (cfg.bucket_size < 1) issues.push_back("bucket_size must be >= 1");
  if (cfg.retry_threshold < 1) issues.push_back("retry_threshold must be >= 1");
  if (cfg.recharge_ticks < 1) issues.push_back("recharge_ticks must be >= 1");
  if (cfg.dwell_ticks < 0) issues.push_back("dwell_ticks must be >= 0");
  if (cfg.sensor_range <= 0) issues.push_back("sensor_range must be positive");
  if (cfg.wire_slots < 1) issues.push_back("wire_slots must be >= 1");
  if (cfg.max_ticks < 1) issues.push_back("max_ticks must be >= 1");

  const Rect arena_rect{0.0, 0.0, env.arena_width, env.arena_height};
  if (!arena_rect.contains(env.charge_station)) {
    issues.push_back("charge station lies outside the arena");
  }

  for (std::size_t i = 0; i < env.spots.size(); ++i) {
    const auto& s = env.spots[i];
    const std::string tag = "spot " + std::to_string(i);
    if (s.side <= 0) issues.push_back(tag + ": side must be positive");
    if (s.color != 0 && s.color != 1) {
      issues.push_back(tag + ": color must be 0 or 1");
    }
    const Rect r = spot_rect(s);
    if (r.x < 0 || r.y < 0 || r.x + r.w > env.arena_width ||
        r.y + r.h > env.arena_height) {
      issues.push_back(tag + ": extends outside the arena");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (rects_overlap(r, spot_rect(env.spots[k]))) {
        issues.push_back(tag + ": overlaps spot " + std::to_string(k));
      }
    }
    for (std::size_t k = 0; k < env.obstacles.size(); ++k) {
      if (rects_overlap(r, env.obstacles[k])) {
        issues.push_back(tag + ": overlaps obstacle " + std::to_string(k));
      }
    }
  }
  for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
    const auto& o = env.obstacles[i];
    if (o.w <= 0 || o.h <= 0 || o.x < 0 || o.y < 0 ||
        o.x + o.w > env.arena_width || o.y + o.h > env.arena_height) {
      issues.push_back("obstacle " + std::to_string(i) +
                       ": must lie inside the arena with positive extents");
    }
  }
  for (std::size_t i = 0; i < env.stations.size(); ++i) {
    if (env.stations[i].radius <= 0) {
      issues.push_back("station " + std::to_string(i) + ": radius must be positive");
    }
  }

  switch (cfg.method) {
    case Method::kM1:
    case Method::kM2:
      if (cfg.chapar_count != 0) {
        issues.push_back("m1/m2 run without chapars (chapar_count must be 0)");
      }
      if (!env.stations.empty()) {
        issues.push_back("m1/m2 run without stations");
      }
      break;
    case Method::kM3:
      if (env.stations.empty()) {
        issues.push_back("m3 needs at least one station");
      }
      break;
    case Method::kM4: {
      if (env.stations.size() != 1) {
        issues.push_back("m4 needs exactly one station");
      } else {
        const double diagonal =
            std::hypot(env.arena_width, env.arena_height);
        if (env.stations[0].radius < diagonal) {
          issues.push_back("m4 station radius must cover the arena (>= " +
                           std::to_string(diagonal) + ")");
        }
      }
      break;
    }
  }

  std::set<std::pair<int, int>> failed_targets;  // (kind, id)
  for (const auto& ev : cfg.failure_events) {
    if (ev.at_tick < 0 || ev.at_tick >= cfg.max_ticks) {
      issues.push_back("failure event at_tick must lie in [0, max_ticks)");
    }
    if (ev.target == FailureEvent::Target::kRobot) {
      if (ev.id < 1 || ev.id > cfg.worker_count + cfg.chapar_count) {
        issues.push_back("failure event targets unknown robot " +
                         std::to_string(ev.id));
      }
    } else {
      if (ev.id < 0 || ev.id >= static_cast<int>(env.stations.size())) {
        issues.push_back("failure event targets unknown station " +
                         std::to_string(ev.id));
      }
    }
    const auto key = std::make_pair(static_cast<int>(ev.target), ev.id);
    if (!failed_targets.insert(key).second) {
      issues.push_back("duplicate failure event for the same target");
    }
  }

  if (!issues.empty()) throw ConfigError(issues);
}

}  // namespace swarm
