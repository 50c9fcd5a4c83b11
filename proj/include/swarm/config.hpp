#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swarm/errors.hpp"
#include "swarm/geometry.hpp"
#include "swarm/protocol.hpp"

namespace swarm {

// The four allocation methods. m1/m2 are pure worker gossip (static/dynamic
// target color); m3 adds courier robots and a chain of limited-range relay
// stations; m4 adds couriers and a single arena-covering station.
enum class Method { kM1, kM2, kM3, kM4 };

const char* method_name(Method m);
Method method_from_string(const std::string& s);  // throws ConfigError

// Whether a worker keeps its initial target color or resamples it
// periodically from the color mix of its message.
enum class TargetPolicy { kStatic, kDynamic };

// Initial target colors: first half of the ids green and the rest black,
// or an independent coin flip per worker.
enum class TargetAssignment { kSplit, kRandom };

struct SpotConfig {
  double cx = 0.0;
  double cy = 0.0;
  double side = 0.3;
  int color = 0;
};

struct StationConfig {
  double x = 0.0;
  double y = 0.0;
  double radius = 0.5;
};

struct EnvironmentConfig {
  double arena_width = 3.0;
  double arena_height = 3.0;
  std::vector<SpotConfig> spots;
  std::vector<Rect> obstacles;
  std::vector<StationConfig> stations;
  Vec2 charge_station{0.1, 0.1};
};

struct FailureEvent {
  enum class Target { kRobot, kStation };
  Tick at_tick = 0;
  Target target = Target::kRobot;
  int id = 0;
};

struct SimConfig {
  int schema_version = 1;
  EnvironmentConfig environment;
  Method method = Method::kM1;

  int worker_count = 10;
  int chapar_count = 0;

  Tick forage_budget = 250;
  Tick work_budget = 500;
  Tick return_budget = 250;

  double worker_speed = 0.02;   // m per tick
  double chapar_speed = 0.06;   // m per tick, must exceed worker_speed
  double worker_radio = 0.5;    // m
  double chapar_radio = 0.5;    // m

  int flood_period = 5;         // worker gossip cadence, ticks
  int chapar_flood_period = 1;  // courier gossip cadence, ticks
  Tick resample_period = 100;   // dynamic target resampling, ticks
  Tick sync_period = 100;       // m3 courier station visit cadence, ticks
  int bucket_size = 5;          // hops per ranking category
  int retry_threshold = 6;      // decision attempts before giving up
  Tick recharge_ticks = 50;
  int dwell_ticks = 10;         // measurement pause on first spot entry
  double sensor_range = 0.05;   // obstacle avoidance lookahead, m
  int wire_slots = 16;          // fixed slots per serialized message frame

  Tick max_ticks = 5000;
  std::uint64_t seed = 1;
  TargetAssignment assignment = TargetAssignment::kSplit;
  TargetPolicy worker_policy = TargetPolicy::kStatic;  // workers in m3/m4
  bool stop_on_quiescence = true;
  bool log_frames = false;  // include wire frames in broadcast events

  std::vector<FailureEvent> failure_events;
};

// The worker controller actually in force: m1 forces static, m2 dynamic,
// m3/m4 take worker_policy.
TargetPolicy effective_policy(const SimConfig& cfg);

// Parse a JSON config document. Unknown keys and malformed values are
// reported as ConfigError; structural validation is done separately.
SimConfig parse_config(const std::string& json_text);
SimConfig load_config_file(const std::string& path);
std::string dump_config(const SimConfig& cfg);

// Startup validation; throws ConfigError listing every violated constraint.
void validate(const SimConfig& cfg);

}  // namespace swarm
