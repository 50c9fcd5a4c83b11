#include "swarm/controllers.hpp"

#include <string>

#include "swarm/errors.hpp"

namespace swarm {

namespace {

void spend(Tick& spent, Tick budget, const char* part) {
  if (spent >= budget) {
    throw InvariantViolation(std::string("energy overspend on ") + part +
                             " budget");
  }
  ++spent;
}

}  // namespace

EnergyLedger tick_energy(EnergyLedger ledger, WorkerFsm mode) {
  switch (mode) {
    case WorkerFsm::kForage:
      spend(ledger.forage_spent, ledger.forage_budget, "forage");
      break;
    case WorkerFsm::kTransit:
    case WorkerFsm::kDeployed:
      spend(ledger.work_spent, ledger.work_budget, "work");
      break;
    case WorkerFsm::kReturn:
      spend(ledger.return_spent, ledger.return_budget, "return");
      break;
    case WorkerFsm::kCharging:
    case WorkerFsm::kStranded:
      break;
  }
  return ledger;
}

namespace {

void clear_dwell(WorkerState& s) {
  s.dwell_remaining = 0;
  s.dwell_spot.reset();
}

void run_decision(WorkerState& s, const SimConfig& cfg, WorkerStepResult& out) {
  const DecisionOutcome outcome = decide(s.msg, s.target, s.pose.pos, s.attempts,
                                         cfg.retry_threshold, cfg.bucket_size);
  DecidePayload note{s.attempts, outcome.go, std::nullopt};
  if (outcome.go) {
    note.key = outcome.key;
    s.mode = WorkerFsm::kTransit;
    s.transit_target = outcome.key;
  } else {
    s.mode = WorkerFsm::kReturn;
  }
  out.notes.decide = note;
  clear_dwell(s);
}

void bump_and_redecide(WorkerState& s, const SimConfig& cfg, WorkerStepResult& out) {
  s.attempts += 1;
  run_decision(s, cfg, out);
}

// Row creation once the measurement pause completes (or immediately when
// dwell_ticks is 0). A row may have arrived by radio mid-dwell; then the
// measurement is discarded and the merged row stands.
void finish_discovery(WorkerState& s, const SpotPerception& per, Tick now,
                      WorkerStepResult& out) {
  const SpotKey key = spot_key(per.center);
  if (!s.msg.contains(key)) {
    s.msg.insert(key, new_row(per.center, per.area_cm2, per.color, now));
    out.notes.discovery = DiscoveryPayload{key, per.spot_id, per.color, s.target};
    out.actions.broadcast = s.msg;  // fresh news goes out at once
  }
  s.dwell_spot.reset();

  const SpotRow* row = s.msg.find(key);
  if (s.mode == WorkerFsm::kForage) {
    if (per.color == s.target && row->needed >= 1 && s.denied_key != key) {
      out.actions.deploy_spot = per.spot_id;
      out.actions.deploy_from_forage = true;
    }
  } else if (s.mode == WorkerFsm::kTransit) {
    if (key != s.transit_target && accept_en_route(per, row, s.target)) {
      out.actions.deploy_spot = per.spot_id;
    }
  }
}

// Shared dwell machinery. Returns true when this tick was consumed by the
// measurement pause (the robot stands still).
bool dwell_tick(WorkerState& s, const std::optional<SpotPerception>& sensed,
                Tick now, const SimConfig& cfg, WorkerStepResult& out) {
  if (s.dwell_remaining == 0 && sensed && !s.msg.contains(spot_key(sensed->center))) {
    if (cfg.dwell_ticks == 0) {
      finish_discovery(s, *sensed, now, out);
      return false;
    }
    s.dwell_remaining = cfg.dwell_ticks;
    s.dwell_spot = *sensed;
  }
  if (s.dwell_remaining > 0) {
    --s.dwell_remaining;
    out.actions.idle = true;
    if (s.dwell_remaining == 0 && s.dwell_spot) {
      const SpotPerception per = *s.dwell_spot;
      finish_discovery(s, per, now, out);
    }
    return true;
  }
  return false;
}

void forage_tick(WorkerState& s, const std::optional<SpotPerception>& sensed,
                 std::span<const Vec2> steering_obstacles, const Arena& arena,
                 Tick now, const SimConfig& cfg, AgentRng& rng,
                 WorkerStepResult& out) {
  s.deploy_denied = false;  // a denied forage attempt is remembered per spot
  if (s.denied_key && (!sensed || spot_key(sensed->center) != *s.denied_key)) {
    s.denied_key.reset();
  }

  if (!dwell_tick(s, sensed, now, cfg, out)) {
    bool walk = true;
    if (sensed) {
      const SpotKey key = spot_key(sensed->center);
      const SpotRow* row = s.msg.find(key);
      if (row != nullptr && sensed->color == s.target && row->needed >= 1 &&
          s.denied_key != key) {
        out.actions.deploy_spot = sensed->spot_id;
        out.actions.deploy_from_forage = true;
        walk = false;  // hold position while the claim is arbitrated
      }
    }
    if (walk && !out.actions.deploy_spot) {
      out.actions.move = steer(s.pose, arena, steering_obstacles, rng,
                               steer_random_walk(), cfg.sensor_range);
    }
  }

  if (s.policy == TargetPolicy::kDynamic && now > 0 &&
      now % cfg.resample_period == 0 && !s.msg.empty()) {
    const Color next = resample_target(s.msg, s.target, rng);
    out.notes.resample = ResamplePayload{s.target, next};
    s.target = next;
  }

  if (s.energy.forage_spent >= s.energy.forage_budget) {
    s.attempts = 0;
    run_decision(s, cfg, out);
  }
}

void transit_tick(WorkerState& s, const std::optional<SpotPerception>& sensed,
                  std::span<const Vec2> steering_obstacles, const Arena& arena,
                  Tick now, const SimConfig& cfg, AgentRng& rng,
                  WorkerStepResult& out) {
  if (s.deploy_denied) {
    s.deploy_denied = false;
    bump_and_redecide(s, cfg, out);
    if (s.mode != WorkerFsm::kTransit) return;  // returning; moves next tick
  }

  // Deployed robots gossip updated rows; a target that filled up while we
  // were under way is abandoned without walking the rest of the distance.
  const SpotRow* target_row = s.msg.find(s.transit_target);
  if (target_row == nullptr || target_row->needed <= 0) {
    bump_and_redecide(s, cfg, out);
    if (s.mode != WorkerFsm::kTransit) return;
    target_row = s.msg.find(s.transit_target);
  }

  if (s.energy.work_spent >= s.energy.work_budget) {
    s.mode = WorkerFsm::kReturn;
    clear_dwell(s);
    return;
  }

  if (dwell_tick(s, sensed, now, cfg, out)) return;
  if (out.actions.deploy_spot) return;  // en-route claim from finish_discovery

  if (sensed) {
    const SpotKey key = spot_key(sensed->center);
    if (key == s.transit_target) {
      out.actions.deploy_spot = sensed->spot_id;  // arrival
      return;
    }
    if (accept_en_route(*sensed, s.msg.find(key), s.target)) {
      out.actions.deploy_spot = sensed->spot_id;
      return;
    }
  }
  out.actions.move = steer(s.pose, arena, steering_obstacles, rng,
                           steer_go_to(target_row->center), cfg.sensor_range);
}

void deployed_tick(WorkerState& s, WorkerStepResult& out) {
  if (s.energy.work_spent >= s.energy.work_budget) {
    out.actions.leave_spot = s.deployed_spot;
    s.mode = WorkerFsm::kReturn;
  } else {
    out.actions.idle = true;
  }
}

void return_tick(WorkerState& s, std::span<const Vec2> steering_obstacles,
                 const Arena& arena, const SimConfig& cfg, AgentRng& rng,
                 WorkerStepResult& out) {
  if (in_range(s.pose.pos, arena.charge_station, cfg.sensor_range)) {
    s.mode = WorkerFsm::kCharging;
    s.charge_progress = 0;
    out.actions.idle = true;
    return;
  }
  if (s.energy.return_spent >= s.energy.return_budget) {
    s.mode = WorkerFsm::kStranded;
    out.notes.stranded = true;
    return;
  }
  out.actions.move = steer(s.pose, arena, steering_obstacles, rng,
                           steer_go_to(arena.charge_station), cfg.sensor_range);
}

void charging_tick(WorkerState& s, const SimConfig& cfg, WorkerStepResult& out) {
  ++s.charge_progress;
  if (s.charge_progress >= cfg.recharge_ticks) {
    s.energy = EnergyLedger{cfg.forage_budget, cfg.work_budget, cfg.return_budget,
                            0, 0, 0};
    s.attempts = 0;
    s.charge_progress = 0;
    s.mode = WorkerFsm::kForage;
    out.actions.recharge_done = true;
  } else {
    out.actions.idle = true;
  }
}

}  // namespace

WorkerStepResult worker_step(WorkerState& s,
                             const std::optional<SpotPerception>& sensed,
                             std::span<const PrivateMessage> inbox,
                             std::span<const Vec2> steering_obstacles,
                             const Arena& arena, Tick now, const SimConfig& cfg,
                             AgentRng& rng) {
  WorkerStepResult out;
  if (s.failed || s.mode == WorkerFsm::kStranded) return out;

  for (const auto& m : inbox) {
    merge_into(s.msg, m);
  }

  const WorkerFsm entry_mode = s.mode;
  s.energy = tick_energy(s.energy, entry_mode);

  switch (entry_mode) {
    case WorkerFsm::kForage:
      forage_tick(s, sensed, steering_obstacles, arena, now, cfg, rng, out);
      break;
    case WorkerFsm::kTransit:
      transit_tick(s, sensed, steering_obstacles, arena, now, cfg, rng, out);
      break;
    case WorkerFsm::kDeployed:
      deployed_tick(s, out);
      break;
    case WorkerFsm::kReturn:
      return_tick(s, steering_obstacles, arena, cfg, rng, out);
      break;
    case WorkerFsm::kCharging:
      charging_tick(s, cfg, out);
      break;
    case WorkerFsm::kStranded:
      break;
  }

  // Periodic gossip in every active mode; discovery already queued one.
  if (!out.actions.broadcast && now % cfg.flood_period == 0 && !s.msg.empty() &&
      s.mode != WorkerFsm::kCharging && s.mode != WorkerFsm::kStranded) {
    out.actions.broadcast = s.msg;
  }
  return out;
}

ChaparStepResult chapar_step(ChaparState& s,
                             std::span<const PrivateMessage> inbox,
                             std::span<const Station> stations,
                             std::span<const Vec2> steering_obstacles,
                             const Arena& arena, Tick now, const SimConfig& cfg,
                             AgentRng& rng) {
  ChaparStepResult out;
  if (s.failed) return out;

  for (const auto& m : inbox) {
    if (!merge_into(s.msg, m).inserted.empty()) {
      s.pending_ferry = true;
    }
  }

  switch (s.mode) {
    case ChaparFsm::kWander: {
      const bool periodic_visit = cfg.method == Method::kM3 &&
                                  now - s.last_sync >= cfg.sync_period;
      if ((s.pending_ferry || periodic_visit) && !stations.empty()) {
        s.station_target = nearest_station(s.pose.pos, stations).id;
        s.mode = ChaparFsm::kGoStation;
        out.actions.move =
            steer(s.pose, arena, steering_obstacles, rng,
                  steer_go_to(stations[s.station_target].position),
                  cfg.sensor_range);
      } else {
        out.actions.move = steer(s.pose, arena, steering_obstacles, rng,
                                 steer_random_walk(), cfg.sensor_range);
      }
      break;
    }
    case ChaparFsm::kGoStation: {
      const Station& st = stations[s.station_target];
      if (in_range(s.pose.pos, st.position, st.radius)) {
        out.actions.sync = SyncRequest{st.id, s.msg};
        if (!st.failed) {
          merge_into(s.msg, st.message);  // download side of the exchange
        }
        s.last_sync = now;
        s.pending_ferry = false;
        s.mode = ChaparFsm::kSync;
        out.actions.idle = true;
      } else {
        out.actions.move = steer(s.pose, arena, steering_obstacles, rng,
                                 steer_go_to(st.position), cfg.sensor_range);
      }
      break;
    }
    case ChaparFsm::kSync:
      s.mode = ChaparFsm::kWander;
      out.actions.move = steer(s.pose, arena, steering_obstacles, rng,
                               steer_random_walk(), cfg.sensor_range);
      break;
  }

  if (now % cfg.chapar_flood_period == 0 && !s.msg.empty()) {
    out.actions.broadcast = s.msg;
  }
  return out;
}

StationStepResult station_step(Station& st, std::span<const PrivateMessage> inbox,
                               bool omniscient) {
  StationStepResult out;
  if (st.failed) return out;

  bool changed = st.dirty;
  st.dirty = false;
  for (const auto& m : inbox) {
    changed = merge_into(st.message, m).changed() || changed;
  }
  out.broadcast = omniscient ? changed : true;
  return out;
}

}  // namespace swarm
