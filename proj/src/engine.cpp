#include "swarm/engine.hpp"

#include <algorithm>
#include <string>

#include "swarm/errors.hpp"

namespace swarm {

namespace {

constexpr int kMaxPlacementTries = 256;

Vec2 place_robot(const Arena& arena, AgentRng& rng) {
  constexpr double kMargin = 0.05;
  for (int i = 0; i < kMaxPlacementTries; ++i) {
    const Vec2 p{rng.uniform(kMargin, arena.width - kMargin),
                 rng.uniform(kMargin, arena.height - kMargin)};
    if (!arena.in_obstacle(p)) return p;
  }
  throw ConfigError("could not place a robot outside the obstacles");
}

}  // namespace

Sim::Sim(SimConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);

  world_.arena.width = cfg_.environment.arena_width;
  world_.arena.height = cfg_.environment.arena_height;
  world_.arena.obstacles = cfg_.environment.obstacles;
  world_.arena.charge_station = cfg_.environment.charge_station;
  int spot_id = 0;
  for (const auto& sc : cfg_.environment.spots) {
    Spot s;
    s.id = spot_id++;
    s.center = {sc.cx, sc.cy};
    s.side = sc.side;
    s.color = color_from_int(sc.color);
    s.capacity = capacity_of(s.area_cm2());
    world_.spots.push_back(std::move(s));
  }
  int station_id = 0;
  for (const auto& st : cfg_.environment.stations) {
    world_.stations.push_back(
        Station{station_id++, {st.x, st.y}, st.radius, {}, false, false});
  }

  const int agent_count = cfg_.worker_count + cfg_.chapar_count;
  rng_.reserve(static_cast<std::size_t>(agent_count) + 1);
  rng_.emplace_back(cfg_.seed, 0);  // stream 0 reserved; agents start at 1
  for (int stream = 1; stream <= agent_count; ++stream) {
    rng_.emplace_back(cfg_.seed, static_cast<std::uint64_t>(stream));
  }

  const TargetPolicy policy = effective_policy(cfg_);
  for (int id = 1; id <= cfg_.worker_count; ++id) {
    WorkerState w;
    w.id = id;
    AgentRng& rng = rng_[static_cast<std::size_t>(id)];
    w.pose.pos = place_robot(world_.arena, rng);
    w.pose.heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
    if (cfg_.assignment == TargetAssignment::kSplit) {
      w.target = id <= (cfg_.worker_count + 1) / 2 ? Color::kGreen : Color::kBlack;
    } else {
      w.target = rng.u01() < 0.5 ? Color::kGreen : Color::kBlack;
    }
    w.policy = policy;
    w.energy = EnergyLedger{cfg_.forage_budget, cfg_.work_budget,
                            cfg_.return_budget, 0, 0, 0};
    workers_.push_back(std::move(w));
  }
  for (int k = 1; k <= cfg_.chapar_count; ++k) {
    ChaparState c;
    c.id = k;
    c.stream = cfg_.worker_count + k;
    AgentRng& rng = rng_[static_cast<std::size_t>(c.stream)];
    c.pose.pos = place_robot(world_.arena, rng);
    c.pose.heading = rng.uniform(-std::numbers::pi, std::numbers::pi);
    chapars_.push_back(std::move(c));
  }

  agent_inbox_.resize(static_cast<std::size_t>(agent_count) + 1);
  agent_next_inbox_.resize(static_cast<std::size_t>(agent_count) + 1);
  station_inbox_.resize(world_.stations.size());
  station_next_inbox_.resize(world_.stations.size());
}

void Sim::inject_failure(const FailureEvent& ev) {
  if (ev.target == FailureEvent::Target::kRobot) {
    if (ev.id >= 1 && ev.id <= cfg_.worker_count) {
      WorkerState& w = workers_[static_cast<std::size_t>(ev.id - 1)];
      if (w.failed) {
        throw std::invalid_argument("robot " + std::to_string(ev.id) +
                                    " already failed");
      }
      w.failed = true;
      FailurePayload payload;
      if (w.mode == WorkerFsm::kDeployed) {
        // Work in the spot continues with whoever is left.
        if (Spot* sp = world_.spot_by_id(w.deployed_spot)) {
          sp->occupants.erase(w.id);
          payload.freed_spot = sp->id;
        }
      }
      log_.append({now_, {'w', w.id}, EventKind::kFailure, payload});
      return;
    }
    const int ordinal = ev.id - cfg_.worker_count;
    if (ordinal >= 1 && ordinal <= cfg_.chapar_count) {
      ChaparState& c = chapars_[static_cast<std::size_t>(ordinal - 1)];
      if (c.failed) {
        throw std::invalid_argument("robot " + std::to_string(ev.id) +
                                    " already failed");
      }
      c.failed = true;
      log_.append({now_, {'c', c.id}, EventKind::kFailure, FailurePayload{}});
      return;
    }
    throw std::invalid_argument("unknown robot id " + std::to_string(ev.id));
  }

  if (ev.id < 0 || ev.id >= static_cast<int>(world_.stations.size())) {
    throw std::invalid_argument("unknown station id " + std::to_string(ev.id));
  }
  Station& st = world_.stations[static_cast<std::size_t>(ev.id)];
  if (st.failed) {
    throw std::invalid_argument("station " + std::to_string(ev.id) +
                                " already failed");
  }
  st.failed = true;
  log_.append({now_, {'s', st.id}, EventKind::kFailure, FailurePayload{}});
}

void Sim::queue_broadcast(AgentRef sender, Vec2 origin, double radius,
                          const PrivateMessage& msg) {
  // One broadcast per sender per tick; a later one (deploy update) wins.
  for (auto& b : outbox_) {
    if (b.sender == sender) {
      b.origin = origin;
      b.radius = radius;
      b.message = msg;
      return;
    }
  }
  outbox_.push_back({sender, origin, radius, msg});
}

void Sim::step_workers(std::span<const Vec2> positions) {
  for (WorkerState& w : workers_) {
    if (w.failed || w.mode == WorkerFsm::kStranded) continue;
    const auto sensed = world_.sense_spot(w.pose.pos);
    const auto inbox = std::span<const PrivateMessage>(
        agent_inbox_[static_cast<std::size_t>(w.id)]);
    auto res = worker_step(w, sensed, inbox, positions, world_.arena, now_, cfg_,
                           rng_[static_cast<std::size_t>(w.id)]);

    const AgentRef ref{'w', w.id};
    if (res.notes.discovery) {
      log_.append({now_, ref, EventKind::kDiscovery, *res.notes.discovery});
    }
    if (res.notes.resample) {
      log_.append({now_, ref, EventKind::kResample, *res.notes.resample});
    }
    if (res.notes.decide) {
      log_.append({now_, ref, EventKind::kDecide, *res.notes.decide});
    }
    if (res.notes.stranded) {
      log_.append({now_, ref, EventKind::kStranded, EmptyPayload{}});
    }
    if (res.actions.recharge_done) {
      log_.append({now_, ref, EventKind::kRecharge, EmptyPayload{}});
    }

    if (res.actions.move) w.pose.heading = *res.actions.move;
    if (res.actions.deploy_spot) {
      deploys_.push_back({w.id, *res.actions.deploy_spot,
                          res.actions.deploy_from_forage});
    }
    if (res.actions.leave_spot) leaves_.push_back({w.id, *res.actions.leave_spot});
    if (res.actions.broadcast) {
      queue_broadcast(ref, w.pose.pos, cfg_.worker_radio, *res.actions.broadcast);
    }
    // Moves are applied after arbitration; remember who wants to advance.
    w.wants_move = res.actions.move.has_value();
  }
}

void Sim::step_chapars(std::span<const Vec2> positions) {
  for (ChaparState& c : chapars_) {
    if (c.failed) continue;
    const auto inbox = std::span<const PrivateMessage>(
        agent_inbox_[static_cast<std::size_t>(c.stream)]);
    auto res = chapar_step(c, inbox, world_.stations, positions, world_.arena,
                           now_, cfg_, rng_[static_cast<std::size_t>(c.stream)]);
    if (res.actions.move) {
      c.pose.heading = *res.actions.move;
      c.wants_move = true;
    } else {
      c.wants_move = false;
    }
    if (res.actions.sync) {
      syncs_.push_back({c.id, std::move(*res.actions.sync)});
    }
    if (res.actions.broadcast) {
      queue_broadcast({'c', c.id}, c.pose.pos, cfg_.chapar_radio,
                      *res.actions.broadcast);
    }
  }
}

void Sim::arbitrate(Tick now) {
  // Leaves free slots before this tick's claims are judged.
  for (const auto& lv : leaves_) {
    Spot* sp = world_.spot_by_id(lv.spot_id);
    if (sp == nullptr) {
      throw InvariantViolation("leave for unknown spot " +
                               std::to_string(lv.spot_id));
    }
    sp->occupants.erase(lv.worker_id);
    log_.append({now, {'w', lv.worker_id}, EventKind::kLeave,
                 LeavePayload{lv.spot_id, "work_done"}});
  }

  // Requests were collected in ascending worker id; the lowest id wins the
  // last slot.
  for (const auto& req : deploys_) {
    Spot* sp = world_.spot_by_id(req.spot_id);
    if (sp == nullptr) {
      throw InvariantViolation("deploy for unknown spot " +
                               std::to_string(req.spot_id));
    }
    WorkerState& w = workers_[static_cast<std::size_t>(req.worker_id - 1)];
    if (sp->free_slots() >= 1) {
      sp->occupants.insert(w.id);
      w.mode = WorkerFsm::kDeployed;
      w.deployed_spot = sp->id;
      w.deploy_denied = false;
      w.denied_key.reset();
      w.dwell_remaining = 0;
      w.dwell_spot.reset();
      w.wants_move = false;
      SpotRow* row = w.msg.find(spot_key(sp->center));
      if (row == nullptr) {
        throw InvariantViolation("worker " + std::to_string(w.id) +
                                 " deployed without a row for the spot");
      }
      *row = apply_arrival(*row, now);
      log_.append({now, {'w', w.id}, EventKind::kDeploy,
                   DeployPayload{sp->id, sp->color, w.target, req.from_forage}});
      // The arrival update goes out immediately.
      queue_broadcast({'w', w.id}, w.pose.pos, cfg_.worker_radio, w.msg);
    } else {
      w.deploy_denied = true;
      if (req.from_forage) {
        w.denied_key = spot_key(sp->center);
      }
    }
  }
}

void Sim::apply_moves() {
  auto advance = [&](Pose& pose, bool wants, double speed) {
    if (!wants) return;
    const Vec2 proposed = pose.pos + unit(pose.heading) * speed;
    if (world_.arena.inside(proposed) && !world_.arena.in_obstacle(proposed)) {
      pose.pos = proposed;
    }
  };
  for (WorkerState& w : workers_) {
    advance(w.pose, w.wants_move && !w.failed, cfg_.worker_speed);
    w.wants_move = false;
  }
  for (ChaparState& c : chapars_) {
    advance(c.pose, c.wants_move && !c.failed, cfg_.chapar_speed);
    c.wants_move = false;
  }
}

void Sim::apply_syncs() {
  for (auto& sync : syncs_) {
    Station& st = world_.stations[static_cast<std::size_t>(sync.req.station_id)];
    if (st.failed) continue;  // a dead turret exchanges nothing
    const MergeStats stats = merge_into(st.message, sync.req.message);
    st.dirty = stats.changed() || st.dirty;
    const ChaparState& c = chapars_[static_cast<std::size_t>(sync.chapar_id - 1)];
    int gained = 0;
    for (const auto& [key, row] : st.message) {
      (void)row;
      if (!sync.req.message.contains(key)) ++gained;
    }
    log_.append({now_, {'c', c.id}, EventKind::kSync,
                 SyncPayload{st.id, stats.inserted, gained}});
  }
}

void Sim::step_stations() {
  const bool omniscient = cfg_.method == Method::kM4;
  for (Station& st : world_.stations) {
    const auto inbox = std::span<const PrivateMessage>(
        station_inbox_[static_cast<std::size_t>(st.id)]);
    const StationStepResult res = station_step(st, inbox, omniscient);
    if (res.broadcast && !st.message.empty()) {
      queue_broadcast({'s', st.id}, st.position, st.radius, st.message);
    }
  }
}

void Sim::deliver() {
  for (const auto& b : outbox_) {
    BroadcastPayload payload;
    for (const auto& [key, row] : b.message) {
      (void)row;
      payload.keys.push_back(key);
    }
    if (cfg_.log_frames) {
      payload.frame = to_wire(b.message, cfg_.wire_slots);
    }

    for (const WorkerState& w : workers_) {
      const AgentRef ref{'w', w.id};
      if (ref == b.sender || w.failed || w.mode == WorkerFsm::kStranded) continue;
      if (in_range(b.origin, w.pose.pos, b.radius)) {
        agent_next_inbox_[static_cast<std::size_t>(w.id)].push_back(b.message);
        payload.receivers.push_back(ref);
      }
    }
    for (const ChaparState& c : chapars_) {
      const AgentRef ref{'c', c.id};
      if (ref == b.sender || c.failed) continue;
      if (in_range(b.origin, c.pose.pos, b.radius)) {
        agent_next_inbox_[static_cast<std::size_t>(c.stream)].push_back(b.message);
        payload.receivers.push_back(ref);
      }
    }
    for (const Station& st : world_.stations) {
      const AgentRef ref{'s', st.id};
      if (ref == b.sender || st.failed) continue;
      // Stations listen over their own coverage disc as well.
      if (in_range(b.origin, st.position, std::max(b.radius, st.radius))) {
        station_next_inbox_[static_cast<std::size_t>(st.id)].push_back(b.message);
        payload.receivers.push_back(ref);
      }
    }
    log_.append({now_, b.sender, EventKind::kBroadcast, std::move(payload)});
  }
  outbox_.clear();
}

void Sim::check_invariants(const std::vector<Tick>& pre_spend,
                           const std::vector<WorkerFsm>& pre_mode) {
  for (const Spot& sp : world_.spots) {
    if (static_cast<int>(sp.occupants.size()) > sp.capacity) {
      throw InvariantViolation("spot " + std::to_string(sp.id) +
                               " oversubscribed");
    }
    for (int id : sp.occupants) {
      const WorkerState& w = workers_[static_cast<std::size_t>(id - 1)];
      if (w.mode != WorkerFsm::kDeployed || w.deployed_spot != sp.id) {
        throw InvariantViolation("occupancy out of step with worker " +
                                 std::to_string(id));
      }
    }
  }
  for (std::size_t i = 0; i < workers_.size(); ++i) {
    const WorkerState& w = workers_[i];
    if (w.mode == WorkerFsm::kDeployed) {
      const Spot* sp = world_.spot_by_id(w.deployed_spot);
      if (sp == nullptr || !sp->occupants.contains(w.id)) {
        throw InvariantViolation("worker " + std::to_string(w.id) +
                                 " deployed but not registered in the spot");
      }
    }
    if (w.failed) continue;
    const bool spends = pre_mode[i] != WorkerFsm::kCharging &&
                        pre_mode[i] != WorkerFsm::kStranded;
    const Tick expected = pre_spend[i] + (spends ? 1 : 0);
    const bool recharged =
        pre_mode[i] == WorkerFsm::kCharging && w.energy.total_spent() == 0;
    if (w.energy.total_spent() != expected && !recharged) {
      throw InvariantViolation("energy ledger of worker " + std::to_string(w.id) +
                               " moved by " +
                               std::to_string(w.energy.total_spent() - pre_spend[i]) +
                               " in one tick");
    }
  }
}

void Sim::tick() {
  for (const auto& ev : cfg_.failure_events) {
    if (ev.at_tick == now_) inject_failure(ev);
  }

  std::swap(agent_inbox_, agent_next_inbox_);
  for (auto& box : agent_next_inbox_) box.clear();
  std::swap(station_inbox_, station_next_inbox_);
  for (auto& box : station_next_inbox_) box.clear();

  // Position snapshot: steering sees every other robot where it stood at the
  // start of the tick, regardless of step order.
  std::vector<Vec2> positions;
  positions.reserve(workers_.size() + chapars_.size());
  for (const auto& w : workers_) positions.push_back(w.pose.pos);
  for (const auto& c : chapars_) positions.push_back(c.pose.pos);

  std::vector<Tick> pre_spend;
  std::vector<WorkerFsm> pre_mode;
  pre_spend.reserve(workers_.size());
  pre_mode.reserve(workers_.size());
  for (const auto& w : workers_) {
    pre_spend.push_back(w.energy.total_spent());
    pre_mode.push_back(w.mode);
  }

  step_workers(positions);
  step_chapars(positions);
  arbitrate(now_);
  apply_moves();
  apply_syncs();
  step_stations();
  deliver();
  check_invariants(pre_spend, pre_mode);

  deploys_.clear();
  leaves_.clear();
  syncs_.clear();
  ++now_;
}

bool Sim::quiescent() const {
  // The run ends at a colony-wide lull: every worker is deployed, stranded,
  // or parked at/heading to the charger with nothing actionable in its
  // message. A parked worker that knows of an open spot is not stable - it
  // will recharge and search again - so it keeps the run alive.
  for (const WorkerState& w : workers_) {
    if (w.failed) continue;
    switch (w.mode) {
      case WorkerFsm::kDeployed:
      case WorkerFsm::kStranded:
        break;
      case WorkerFsm::kForage:
      case WorkerFsm::kTransit:
        return false;
      case WorkerFsm::kReturn:
      case WorkerFsm::kCharging:
        if (!rank(w.msg, w.target, w.pose.pos, cfg_.bucket_size).empty()) {
          return false;
        }
        break;
    }
  }
  return true;
}

RunResult Sim::take_result() {
  return RunResult{std::move(log_), now_, quiescent()};
}

RunResult run(const SimConfig& cfg) {
  Sim sim(cfg);
  bool quiesced = false;
  while (sim.now() < cfg.max_ticks) {
    sim.tick();
    if (cfg.stop_on_quiescence && sim.quiescent()) {
      quiesced = true;
      break;
    }
  }
  RunResult result = sim.take_result();
  result.reached_quiescence = quiesced;
  return result;
}

}  // namespace swarm
