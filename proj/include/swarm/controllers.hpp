#pragma once

#include <optional>
#include <span>

#include "swarm/config.hpp"
#include "swarm/decision.hpp"
#include "swarm/events.hpp"
#include "swarm/protocol.hpp"
#include "swarm/rng.hpp"
#include "swarm/world.hpp"

namespace swarm {

enum class WorkerFsm {
  kForage,    // random walk, sense, gossip
  kTransit,   // heading for a chosen spot
  kDeployed,  // working inside a spot
  kReturn,    // heading for the charge station
  kCharging,
  kStranded,  // return budget ran out; inert, treated as an obstacle
};

enum class ChaparFsm { kWander, kGoStation, kSync };

// Three-part energy: foraging, working (transit and in-spot), returning.
// Spends are nondecreasing within a charge cycle; a recharge resets them.
struct EnergyLedger {
  Tick forage_budget = 0;
  Tick work_budget = 0;
  Tick return_budget = 0;
  Tick forage_spent = 0;
  Tick work_spent = 0;
  Tick return_spent = 0;

  Tick total_spent() const { return forage_spent + work_spent + return_spent; }
};

// One tick of spend for the given mode: foraging draws the forage part,
// transit and deployed work draw the work part, returning draws the return
// part; charging and stranded robots spend nothing. Throws InvariantViolation
// on overspend - the controller must have transitioned out first.
EnergyLedger tick_energy(EnergyLedger ledger, WorkerFsm mode);

struct WorkerState {
  int id = 0;  // 1-based; also the global rng stream id
  Pose pose;
  Color target = Color::kGreen;
  TargetPolicy policy = TargetPolicy::kStatic;
  WorkerFsm mode = WorkerFsm::kForage;
  PrivateMessage msg;
  int attempts = 0;
  EnergyLedger energy;

  SpotKey transit_target{};               // valid in kTransit
  int deployed_spot = -1;                 // valid in kDeployed
  int dwell_remaining = 0;                // measurement pause countdown
  std::optional<SpotPerception> dwell_spot;
  std::optional<SpotKey> denied_key;      // forage deploy denied here; cleared on exit
  bool deploy_denied = false;             // set by the engine after arbitration
  Tick charge_progress = 0;
  bool failed = false;
  bool wants_move = false;  // engine bookkeeping between step and move phases
};

struct ChaparState {
  int id = 0;       // 1-based courier ordinal
  int stream = 0;   // global rng stream id (workers first)
  Pose pose;
  PrivateMessage msg;
  ChaparFsm mode = ChaparFsm::kWander;
  int station_target = -1;
  Tick last_sync = 0;
  bool pending_ferry = false;  // saw a new row, not yet delivered to a station
  bool failed = false;
  bool wants_move = false;
};

struct SyncRequest {
  int station_id = 0;
  PrivateMessage message;  // courier's message offered to the station
};

// What one controller step asks the engine to do. At most one move and one
// broadcast per step; deploys are requests that ground-truth arbitration may
// deny.
struct Actions {
  std::optional<double> move;  // new heading; the engine advances the pose
  std::optional<PrivateMessage> broadcast;
  std::optional<int> deploy_spot;
  bool deploy_from_forage = false;
  std::optional<int> leave_spot;
  std::optional<SyncRequest> sync;
  bool recharge_done = false;
  bool idle = false;
};

// Log-worthy facts the engine cannot see from actions alone.
struct WorkerNotes {
  std::optional<DiscoveryPayload> discovery;
  std::optional<DecidePayload> decide;
  std::optional<ResamplePayload> resample;
  bool stranded = false;
};

struct WorkerStepResult {
  Actions actions;
  WorkerNotes notes;
};

struct ChaparStepResult {
  Actions actions;
};

struct StationStepResult {
  bool broadcast = false;
};

// One tick of the worker controller. Order within the tick: merge the inbox,
// spend energy for the entry mode, then act for the mode. steering_obstacles
// holds every other robot's position (failed ones included - they read as
// obstacles).
WorkerStepResult worker_step(WorkerState& s,
                             const std::optional<SpotPerception>& sensed,
                             std::span<const PrivateMessage> inbox,
                             std::span<const Vec2> steering_obstacles,
                             const Arena& arena, Tick now, const SimConfig& cfg,
                             AgentRng& rng);

// One tick of the courier controller: merge, flood, and ferry new rows to the
// nearest station (plus a periodic visit under m3).
ChaparStepResult chapar_step(ChaparState& s,
                             std::span<const PrivateMessage> inbox,
                             std::span<const Station> stations,
                             std::span<const Vec2> steering_obstacles,
                             const Arena& arena, Tick now, const SimConfig& cfg,
                             AgentRng& rng);

// One tick of a station: merge the inbox, then rebroadcast - every tick in
// relay mode, only on change in omniscient mode.
StationStepResult station_step(Station& st, std::span<const PrivateMessage> inbox,
                               bool omniscient);

}  // namespace swarm
