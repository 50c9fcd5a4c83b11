#pragma once

#include <vector>

#include "swarm/config.hpp"
#include "swarm/controllers.hpp"
#include "swarm/events.hpp"
#include "swarm/rng.hpp"
#include "swarm/world.hpp"

namespace swarm {

struct RunResult {
  EventLog log;
  Tick end_tick = 0;
  bool reached_quiescence = false;
};

// Deterministic tick loop. Phase order within a tick:
//   1. scheduled failures for this tick
//   2. inboxes from last tick become current
//   3. worker then chapar controller steps, ascending agent id
//   4. leaves, then deploy arbitration against ground truth (lowest id wins)
//   5. moves, clamped to walls and obstacles
//   6. courier-station syncs, then station steps
//   7. broadcast delivery into next tick's inboxes
//   8. occupancy and energy invariant checks (violations abort the run)
// Broadcasts sent at tick t are merged by receivers at the start of tick t+1.
class Sim {
 public:
  explicit Sim(SimConfig cfg);  // throws ConfigError

  void tick();
  bool quiescent() const;
  Tick now() const { return now_; }

  const SimConfig& config() const { return cfg_; }
  const World& world() const { return world_; }
  const std::vector<WorkerState>& workers() const { return workers_; }
  const std::vector<ChaparState>& chapars() const { return chapars_; }
  const EventLog& log() const { return log_; }

  // Test access; production callers treat the state as read-only.
  std::vector<WorkerState>& workers_mut() { return workers_; }
  std::vector<ChaparState>& chapars_mut() { return chapars_; }
  World& world_mut() { return world_; }

  // Immediate failure injection. Robots become inert obstacles (a deployed
  // robot's slot is freed); stations stop merging and broadcasting. Throws
  // std::invalid_argument for unknown or already-failed targets.
  void inject_failure(const FailureEvent& ev);

  RunResult take_result();

 private:
  struct PendingBroadcast {
    AgentRef sender;
    Vec2 origin;
    double radius = 0.0;
    PrivateMessage message;
  };

  void step_workers(std::span<const Vec2> positions);
  void step_chapars(std::span<const Vec2> positions);
  void arbitrate(Tick now);
  void apply_moves();
  void apply_syncs();
  void step_stations();
  void deliver();
  void check_invariants(const std::vector<Tick>& pre_spend,
                        const std::vector<WorkerFsm>& pre_mode);
  void queue_broadcast(AgentRef sender, Vec2 origin, double radius,
                       const PrivateMessage& msg);

  SimConfig cfg_;
  World world_;
  std::vector<WorkerState> workers_;
  std::vector<ChaparState> chapars_;
  std::vector<AgentRng> rng_;  // stream per agent, workers then chapars

  std::vector<std::vector<PrivateMessage>> agent_inbox_;
  std::vector<std::vector<PrivateMessage>> agent_next_inbox_;
  std::vector<std::vector<PrivateMessage>> station_inbox_;
  std::vector<std::vector<PrivateMessage>> station_next_inbox_;

  std::vector<PendingBroadcast> outbox_;
  struct DeployRequest {
    int worker_id;
    int spot_id;
    bool from_forage;
  };
  std::vector<DeployRequest> deploys_;
  struct LeaveRequest {
    int worker_id;
    int spot_id;
  };
  std::vector<LeaveRequest> leaves_;
  struct ChaparSync {
    int chapar_id;
    SyncRequest req;
  };
  std::vector<ChaparSync> syncs_;

  EventLog log_;
  Tick now_ = 0;
};

// Build, run to max_ticks or quiescence, and return the log.
RunResult run(const SimConfig& cfg);

}  // namespace swarm
