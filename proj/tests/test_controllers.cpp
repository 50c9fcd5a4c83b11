#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "swarm/controllers.hpp"

using namespace swarm;

namespace {

SimConfig base_cfg() {
  SimConfig cfg;
  cfg.environment.spots = {};
  cfg.worker_count = 1;
  return cfg;
}

WorkerState fresh_worker(const SimConfig& cfg, Color target = Color::kGreen) {
  WorkerState w;
  w.id = 1;
  w.pose = {{1.5, 1.5}, 0.0};
  w.target = target;
  w.energy = EnergyLedger{cfg.forage_budget, cfg.work_budget, cfg.return_budget,
                          0, 0, 0};
  return w;
}

SpotPerception green_spot(int id = 0, Vec2 center = {1.5, 1.5}) {
  return SpotPerception{id, center, 900.0, Color::kGreen, 3};
}

Arena open_arena() { return Arena{}; }

}  // namespace

TEST_CASE("tick_energy spends one unit on the part matching the mode") {
  EnergyLedger led{250, 500, 250, 249, 0, 0};
  led = tick_energy(led, WorkerFsm::kForage);
  CHECK(led.forage_spent == 250);

  EnergyLedger deployed{250, 500, 250, 250, 10, 0};
  deployed = tick_energy(deployed, WorkerFsm::kDeployed);
  CHECK(deployed.work_spent == 11);

  EnergyLedger charging{250, 500, 250, 100, 100, 100};
  CHECK(tick_energy(charging, WorkerFsm::kCharging).total_spent() == 300);
  CHECK(tick_energy(charging, WorkerFsm::kStranded).total_spent() == 300);

  EnergyLedger spent{250, 500, 250, 250, 0, 0};
  CHECK_THROWS_AS(tick_energy(spent, WorkerFsm::kForage), InvariantViolation);
}

TEST_CASE("a worker on a known matching spot claims a slot") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(1, 1);
  WorkerState w = fresh_worker(cfg);
  const SpotPerception per = green_spot();
  w.msg.insert(spot_key(per.center),
               new_row(per.center, per.area_cm2, per.color, 0));

  const auto res = worker_step(w, per, {}, {}, arena, 1, cfg, rng);
  REQUIRE(res.actions.deploy_spot.has_value());
  CHECK(*res.actions.deploy_spot == 0);
  CHECK(res.actions.deploy_from_forage);
  CHECK_FALSE(res.actions.move.has_value());
}

TEST_CASE("an unknown spot triggers the measurement dwell, then a row") {
  SimConfig cfg = base_cfg();
  cfg.dwell_ticks = 4;
  const Arena arena = open_arena();
  AgentRng rng(2, 1);
  WorkerState w = fresh_worker(cfg, Color::kBlack);  // no instant deploy
  const SpotPerception per = green_spot();

  for (int t = 0; t < 3; ++t) {
    const auto res = worker_step(w, per, {}, {}, arena, t, cfg, rng);
    CHECK(res.actions.idle);
    CHECK_FALSE(res.notes.discovery.has_value());
    CHECK_FALSE(res.actions.move.has_value());
  }
  const auto res = worker_step(w, per, {}, {}, arena, 3, cfg, rng);
  REQUIRE(res.notes.discovery.has_value());
  CHECK(res.notes.discovery->spot_id == 0);
  CHECK(res.notes.discovery->color == Color::kGreen);
  REQUIRE(res.actions.broadcast.has_value());  // fresh rows go out at once

  const SpotRow* row = w.msg.find(spot_key(per.center));
  REQUIRE(row != nullptr);
  CHECK(row->capacity == 3);
  CHECK(row->needed == 3);
  CHECK(row->hops == 0);
  CHECK(row->time == 3);
  CHECK(w.energy.forage_spent == 4);  // the dwell still burns forage energy
}

TEST_CASE("a matching discovery is claimed the moment the dwell ends") {
  SimConfig cfg = base_cfg();
  cfg.dwell_ticks = 2;
  const Arena arena = open_arena();
  AgentRng rng(3, 1);
  WorkerState w = fresh_worker(cfg, Color::kGreen);
  const SpotPerception per = green_spot();

  worker_step(w, per, {}, {}, arena, 0, cfg, rng);
  const auto res = worker_step(w, per, {}, {}, arena, 1, cfg, rng);
  REQUIRE(res.actions.deploy_spot.has_value());
  CHECK(res.actions.deploy_from_forage);
}

TEST_CASE("exhausted forage budget with an empty message sends the worker home") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(4, 1);
  WorkerState w = fresh_worker(cfg);
  w.energy.forage_spent = cfg.forage_budget - 1;

  const auto res = worker_step(w, std::nullopt, {}, {}, arena, 10, cfg, rng);
  CHECK(w.mode == WorkerFsm::kReturn);
  REQUIRE(res.notes.decide.has_value());
  CHECK_FALSE(res.notes.decide->go);
  CHECK(res.notes.decide->attempts == 0);
}

TEST_CASE("exhausted forage budget with a known spot starts a transit") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(5, 1);
  WorkerState w = fresh_worker(cfg);
  w.energy.forage_spent = cfg.forage_budget - 1;
  const SpotRow row = new_row({2.5, 2.5}, 900.0, Color::kGreen, 3);
  w.msg.insert(spot_key(row.center), row);

  worker_step(w, std::nullopt, {}, {}, arena, 10, cfg, rng);
  CHECK(w.mode == WorkerFsm::kTransit);
  CHECK(w.transit_target == spot_key(row.center));
}

TEST_CASE("a denied transit claim at the retry threshold gives up") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(6, 1);
  WorkerState w = fresh_worker(cfg);
  w.mode = WorkerFsm::kTransit;
  const SpotRow row = new_row({2.5, 2.5}, 900.0, Color::kGreen, 3);
  w.transit_target = spot_key(row.center);
  w.msg.insert(w.transit_target, row);
  w.attempts = cfg.retry_threshold - 1;
  w.deploy_denied = true;

  const auto res = worker_step(w, std::nullopt, {}, {}, arena, 300, cfg, rng);
  CHECK(w.mode == WorkerFsm::kReturn);
  REQUIRE(res.notes.decide.has_value());
  CHECK(res.notes.decide->attempts == cfg.retry_threshold);
}

TEST_CASE("a transit target that filled up is abandoned mid-way") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(7, 1);
  WorkerState w = fresh_worker(cfg);
  w.mode = WorkerFsm::kTransit;
  SpotRow full = new_row({2.5, 2.5}, 900.0, Color::kGreen, 3);
  full.deployed = 3;
  full.needed = 0;
  w.transit_target = spot_key(full.center);
  w.msg.insert(w.transit_target, full);

  SpotRow open = new_row({0.5, 0.5}, 900.0, Color::kGreen, 3);
  w.msg.insert(spot_key(open.center), open);

  worker_step(w, std::nullopt, {}, {}, arena, 300, cfg, rng);
  CHECK(w.mode == WorkerFsm::kTransit);
  CHECK(w.transit_target == spot_key(open.center));
  CHECK(w.attempts == 1);
}

TEST_CASE("static workers never change target while forage energy lasts") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(8, 1);
  WorkerState w = fresh_worker(cfg, Color::kBlack);
  w.policy = TargetPolicy::kStatic;
  SpotRow row = new_row({2.5, 2.5}, 900.0, Color::kGreen, 0);
  w.msg.insert(spot_key(row.center), row);

  for (Tick t = 0; t < cfg.forage_budget - 1; ++t) {
    worker_step(w, std::nullopt, {}, {}, arena, t, cfg, rng);
    REQUIRE(w.target == Color::kBlack);
    REQUIRE(w.mode == WorkerFsm::kForage);
  }
}

TEST_CASE("dynamic workers resample from an all-green message to green") {
  SimConfig cfg = base_cfg();
  cfg.method = Method::kM2;
  const Arena arena = open_arena();
  AgentRng rng(9, 1);
  WorkerState w = fresh_worker(cfg, Color::kBlack);
  w.policy = TargetPolicy::kDynamic;
  SpotRow row = new_row({2.5, 2.5}, 900.0, Color::kGreen, 0);
  w.msg.insert(spot_key(row.center), row);

  WorkerStepResult last;
  for (Tick t = 1; t <= cfg.resample_period; ++t) {
    last = worker_step(w, std::nullopt, {}, {}, arena, t, cfg, rng);
  }
  REQUIRE(last.notes.resample.has_value());
  CHECK(last.notes.resample->old_target == Color::kBlack);
  CHECK(last.notes.resample->new_target == Color::kGreen);
  CHECK(w.target == Color::kGreen);
}

TEST_CASE("deployed workers leave when the work budget runs out") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(10, 1);
  WorkerState w = fresh_worker(cfg);
  w.mode = WorkerFsm::kDeployed;
  w.deployed_spot = 4;
  w.energy.work_spent = cfg.work_budget - 1;

  const auto res = worker_step(w, std::nullopt, {}, {}, arena, 700, cfg, rng);
  REQUIRE(res.actions.leave_spot.has_value());
  CHECK(*res.actions.leave_spot == 4);
  CHECK(w.mode == WorkerFsm::kReturn);
}

TEST_CASE("a worker that cannot reach the charger strands") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(11, 1);
  WorkerState w = fresh_worker(cfg);
  w.mode = WorkerFsm::kReturn;
  w.pose.pos = {2.9, 2.9};
  w.energy.return_spent = cfg.return_budget - 1;

  const auto res = worker_step(w, std::nullopt, {}, {}, arena, 900, cfg, rng);
  CHECK(w.mode == WorkerFsm::kStranded);
  CHECK(res.notes.stranded);

  // Inert afterwards: no actions, no energy movement.
  const auto after = worker_step(w, std::nullopt, {}, {}, arena, 901, cfg, rng);
  CHECK_FALSE(after.actions.move.has_value());
  CHECK_FALSE(after.actions.broadcast.has_value());
}

TEST_CASE("recharge resets the ledger and restarts foraging") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(12, 1);
  WorkerState w = fresh_worker(cfg);
  w.mode = WorkerFsm::kCharging;
  w.energy.forage_spent = cfg.forage_budget;
  w.energy.return_spent = 100;

  for (Tick t = 0; t < cfg.recharge_ticks - 1; ++t) {
    worker_step(w, std::nullopt, {}, {}, arena, 1000 + t, cfg, rng);
    REQUIRE(w.mode == WorkerFsm::kCharging);
  }
  const auto res =
      worker_step(w, std::nullopt, {}, {}, arena, 1000 + cfg.recharge_ticks - 1,
                  cfg, rng);
  CHECK(res.actions.recharge_done);
  CHECK(w.mode == WorkerFsm::kForage);
  CHECK(w.energy.total_spent() == 0);
}

TEST_CASE("workers gossip on the flood period and keep quiet when empty") {
  SimConfig cfg = base_cfg();
  const Arena arena = open_arena();
  AgentRng rng(13, 1);
  WorkerState w = fresh_worker(cfg);

  auto res = worker_step(w, std::nullopt, {}, {}, arena, 0, cfg, rng);
  CHECK_FALSE(res.actions.broadcast.has_value());  // nothing to say yet

  SpotRow row = new_row({2.5, 2.5}, 900.0, Color::kGreen, 0);
  w.msg.insert(spot_key(row.center), row);
  res = worker_step(w, std::nullopt, {}, {}, arena, cfg.flood_period, cfg, rng);
  CHECK(res.actions.broadcast.has_value());
  res = worker_step(w, std::nullopt, {}, {}, arena, cfg.flood_period + 1, cfg, rng);
  CHECK_FALSE(res.actions.broadcast.has_value());
}

TEST_CASE("a chapar that hears of a new spot ferries it to the nearest station") {
  SimConfig cfg = base_cfg();
  cfg.method = Method::kM3;
  const Arena arena = open_arena();
  AgentRng rng(14, 1);

  std::vector<Station> stations;
  stations.push_back({0, {0.5, 1.5}, 0.3, {}, false, false});
  stations.push_back({1, {2.5, 1.5}, 0.3, {}, false, false});

  ChaparState c;
  c.id = 1;
  c.stream = 2;
  c.pose = {{2.0, 1.5}, 0.0};

  PrivateMessage heard;
  heard.insert(spot_key({1.0, 1.0}), new_row({1.0, 1.0}, 900.0, Color::kGreen, 5));
  const std::vector<PrivateMessage> inbox = {heard};

  const auto res = chapar_step(c, inbox, stations, {}, arena, 6, cfg, rng);
  CHECK(c.mode == ChaparFsm::kGoStation);
  CHECK(c.station_target == 1);  // nearer of the two
  CHECK(res.actions.broadcast.has_value());  // couriers flood every tick
}

TEST_CASE("m3 chapars visit a station periodically even with no news") {
  SimConfig cfg = base_cfg();
  cfg.method = Method::kM3;
  cfg.sync_period = 100;
  const Arena arena = open_arena();
  AgentRng rng(15, 1);

  std::vector<Station> stations;
  stations.push_back({0, {1.5, 1.5}, 0.3, {}, false, false});

  ChaparState c;
  c.id = 1;
  c.stream = 2;
  c.pose = {{0.5, 0.5}, 0.0};
  c.last_sync = 0;

  chapar_step(c, {}, stations, {}, arena, 99, cfg, rng);
  CHECK(c.mode == ChaparFsm::kWander);
  chapar_step(c, {}, stations, {}, arena, 100, cfg, rng);
  CHECK(c.mode == ChaparFsm::kGoStation);

  // m4 couriers only move for fresh rows.
  cfg.method = Method::kM4;
  ChaparState idle = c;
  idle.mode = ChaparFsm::kWander;
  idle.last_sync = 0;
  chapar_step(idle, {}, stations, {}, arena, 500, cfg, rng);
  CHECK(idle.mode == ChaparFsm::kWander);
}

TEST_CASE("reaching the station swaps messages both ways") {
  SimConfig cfg = base_cfg();
  cfg.method = Method::kM3;
  const Arena arena = open_arena();
  AgentRng rng(16, 1);

  const SpotRow row_a = new_row({1.0, 1.0}, 900.0, Color::kGreen, 5);
  const SpotRow row_b = new_row({2.0, 2.0}, 300.0, Color::kBlack, 7);

  std::vector<Station> stations;
  Station st{0, {1.5, 1.5}, 0.5, {}, false, false};
  st.message.insert(spot_key(row_b.center), row_b);
  stations.push_back(st);

  ChaparState c;
  c.id = 1;
  c.stream = 2;
  c.pose = {{1.6, 1.5}, 0.0};  // already inside the station radius
  c.mode = ChaparFsm::kGoStation;
  c.station_target = 0;
  c.pending_ferry = true;
  c.msg.insert(spot_key(row_a.center), row_a);

  const auto res = chapar_step(c, {}, stations, {}, arena, 50, cfg, rng);
  REQUIRE(res.actions.sync.has_value());
  CHECK(res.actions.sync->station_id == 0);
  CHECK(res.actions.sync->message.contains(spot_key(row_a.center)));
  CHECK(c.msg.contains(spot_key(row_b.center)));  // downloaded the station row
  CHECK(c.mode == ChaparFsm::kSync);
  CHECK(c.last_sync == 50);
  CHECK_FALSE(c.pending_ferry);
}

TEST_CASE("relay stations rebroadcast every tick, omniscient only on change") {
  const SpotRow row = new_row({1.0, 1.0}, 900.0, Color::kGreen, 5);
  PrivateMessage msg;
  msg.insert(spot_key(row.center), row);

  Station relay{0, {1.5, 1.5}, 0.8, msg, false, false};
  CHECK(station_step(relay, {}, /*omniscient=*/false).broadcast);
  CHECK(station_step(relay, {}, false).broadcast);

  Station omni{0, {1.5, 1.5}, 5.0, msg, false, false};
  CHECK_FALSE(station_step(omni, {}, /*omniscient=*/true).broadcast);

  const std::vector<PrivateMessage> same = {msg};
  CHECK_FALSE(station_step(omni, same, true).broadcast);  // nothing new in it

  PrivateMessage news;
  news.insert(spot_key({2.0, 2.0}), new_row({2.0, 2.0}, 300.0, Color::kBlack, 9));
  const std::vector<PrivateMessage> inbox = {news};
  CHECK(station_step(omni, inbox, true).broadcast);
  CHECK(omni.message.contains(spot_key({2.0, 2.0})));
}

TEST_CASE("failed stations neither merge nor broadcast") {
  PrivateMessage news;
  news.insert(spot_key({2.0, 2.0}), new_row({2.0, 2.0}, 300.0, Color::kBlack, 9));
  Station st{0, {1.5, 1.5}, 0.8, {}, true, false};
  const std::vector<PrivateMessage> inbox = {news};
  CHECK_FALSE(station_step(st, inbox, false).broadcast);
  CHECK(st.message.empty());
}
