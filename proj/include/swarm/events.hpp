#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/protocol.hpp"

namespace swarm {

// Agents in the log: workers 'w' (ids from 1), chapars 'c' (ids from 1),
// stations 's' (ids from 0).
struct AgentRef {
  char kind = 'w';
  int id = 0;

  std::string str() const { return kind + std::to_string(id); }
  auto operator<=>(const AgentRef&) const = default;
};

enum class EventKind {
  kDiscovery,
  kBroadcast,
  kDeploy,
  kLeave,
  kDecide,
  kResample,
  kSync,
  kFailure,
  kStranded,
  kRecharge,
};

const char* event_kind_name(EventKind k);

struct DiscoveryPayload {
  SpotKey key;
  int spot_id = 0;
  Color color = Color::kBlack;
  Color worker_target = Color::kBlack;  // discoverer's target at the time
};

struct BroadcastPayload {
  std::vector<AgentRef> receivers;
  std::vector<SpotKey> keys;  // row keys in message order
  std::optional<WireFrame> frame;
};

struct DeployPayload {
  int spot_id = 0;
  Color color = Color::kBlack;
  Color worker_target = Color::kBlack;
  bool forage_phase = false;  // true: found while foraging, before any decision
};

struct LeavePayload {
  int spot_id = 0;
  std::string reason;  // "work_done"
};

struct DecidePayload {
  int attempts = 0;
  bool go = false;
  std::optional<SpotKey> key;
};

struct ResamplePayload {
  Color old_target = Color::kBlack;
  Color new_target = Color::kBlack;
};

struct SyncPayload {
  int station_id = 0;
  std::vector<SpotKey> keys_to_station;  // rows new to the station
  int rows_from_station = 0;             // rows new to the courier
};

struct FailurePayload {
  std::optional<int> freed_spot;  // set when a deployed robot failed
};

struct EmptyPayload {
  bool operator==(const EmptyPayload&) const = default;
};

using EventPayload =
    std::variant<DiscoveryPayload, BroadcastPayload, DeployPayload, LeavePayload,
                 DecidePayload, ResamplePayload, SyncPayload, FailurePayload,
                 EmptyPayload>;

struct Event {
  Tick tick = 0;
  AgentRef agent;
  EventKind kind = EventKind::kDiscovery;
  EventPayload payload = EmptyPayload{};
};

// Append-only, tick-ordered record of a run. Within a tick, events follow the
// engine's phase order, so identical (config, seed) pairs produce identical
// logs byte for byte.
struct EventLog {
  std::vector<Event> events;

  void append(Event e) { events.push_back(std::move(e)); }
};

// One JSON object per line; the first line is a meta record carrying
// schema_version, method and seed.
std::string event_to_json(const Event& e);
void write_jsonl(const EventLog& log, const SimConfig& cfg, std::ostream& out);
std::string to_jsonl(const EventLog& log, const SimConfig& cfg);

}  // namespace swarm
