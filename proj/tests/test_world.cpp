#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "swarm/rng.hpp"
#include "swarm/world.hpp"

using namespace swarm;

namespace {

World two_spot_world() {
  World w;
  w.arena.width = 3.0;
  w.arena.height = 3.0;
  Spot a;
  a.id = 0;
  a.center = {1.0, 1.0};
  a.side = 0.3;
  a.color = Color::kGreen;
  a.capacity = capacity_of(a.area_cm2());
  Spot b;
  b.id = 1;
  b.center = {2.2, 2.2};
  b.side = 0.3;
  b.color = Color::kBlack;
  b.capacity = capacity_of(b.area_cm2());
  w.spots = {a, b};
  return w;
}

}  // namespace

TEST_CASE("capacity: one worker per 300 cm^2, rounded up") {
  CHECK(capacity_of(900.0) == 3);
  CHECK(capacity_of(300.0) == 1);
  CHECK(capacity_of(301.0) == 2);
  CHECK(capacity_of(0.3 * 0.3 * 1e4) == 3);  // 0.3 m side through doubles
  CHECK_THROWS_AS(capacity_of(0.0), std::invalid_argument);
  CHECK_THROWS_AS(capacity_of(-900.0), std::invalid_argument);
}

TEST_CASE("sense_spot reports the spot under the robot, or nothing") {
  const World w = two_spot_world();

  const auto at_center = w.sense_spot({1.0, 1.0});
  REQUIRE(at_center.has_value());
  CHECK(at_center->spot_id == 0);
  CHECK(at_center->color == Color::kGreen);
  CHECK(at_center->capacity == 3);
  CHECK(at_center->area_cm2 == doctest::Approx(900.0));

  CHECK_FALSE(w.sense_spot({0.2, 0.2}).has_value());

  // Closed square: the edge itself counts as inside.
  CHECK(w.sense_spot({1.15, 1.0}).has_value());
  CHECK_FALSE(w.sense_spot({1.1501, 1.0}).has_value());
}

TEST_CASE("sense_spot agrees with point-in-square over a grid") {
  const World w = two_spot_world();
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 60; ++j) {
      const Vec2 p{i * 0.05, j * 0.05};
      const auto sensed = w.sense_spot(p);
      bool expect_a = std::abs(p.x - 1.0) <= 0.15 && std::abs(p.y - 1.0) <= 0.15;
      bool expect_b = std::abs(p.x - 2.2) <= 0.15 && std::abs(p.y - 2.2) <= 0.15;
      CHECK(sensed.has_value() == (expect_a || expect_b));
      if (sensed) {
        CHECK(sensed->spot_id == (expect_a ? 0 : 1));
      }
    }
  }
}

TEST_CASE("in_range is a closed ball") {
  CHECK(in_range({0, 0}, {0, 0}, 0.0));
  CHECK(in_range({0, 0}, {0.5, 0.0}, 0.5));
  CHECK_FALSE(in_range({0, 0}, {0.51, 0.0}, 0.5));
}

TEST_CASE("nearest_station: minimum distance, ties to the lowest id") {
  std::vector<Station> stations;
  stations.push_back({0, {1.0, 1.0}, 0.5, {}, false, false});
  CHECK(nearest_station({0, 0}, stations).id == 0);

  stations.push_back({1, {2.0, 1.0}, 0.5, {}, false, false});
  CHECK(nearest_station({1.5, 1.0}, stations).id == 0);  // equidistant
  CHECK(nearest_station({1.9, 1.0}, stations).id == 1);

  CHECK_THROWS_AS(nearest_station({0, 0}, std::span<const Station>{}),
                  std::invalid_argument);
}

TEST_CASE("nearest_station equals an exhaustive scan on random layouts") {
  AgentRng rng(71, 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Station> stations;
    const int n = 1 + static_cast<int>(rng.u01() * 6.0);
    for (int i = 0; i < n; ++i) {
      stations.push_back({i, {rng.uniform(0, 3), rng.uniform(0, 3)}, 0.5, {},
                          false, false});
    }
    const Vec2 p{rng.uniform(0, 3), rng.uniform(0, 3)};

    int best = 0;
    for (int i = 1; i < n; ++i) {
      if (distance(p, stations[static_cast<std::size_t>(i)].position) <
          distance(p, stations[static_cast<std::size_t>(best)].position)) {
        best = i;
      }
    }
    CHECK(nearest_station(p, stations).id == best);
  }
}

TEST_CASE("steer heads straight for a clear target") {
  Arena arena;
  AgentRng rng(73, 2);
  const Pose pose{{1.0, 1.0}, 2.0};
  const double heading =
      steer(pose, arena, {}, rng, steer_go_to({2.0, 1.0}), 0.05);
  CHECK(heading == doctest::Approx(0.0));
}

TEST_CASE("steer rotates away from a wall dead ahead") {
  Arena arena;
  AgentRng rng(79, 3);
  const Pose pose{{0.02, 1.5}, std::numbers::pi};  // facing the x=0 wall
  CHECK_FALSE(forward_clear(pose.pos, pose.heading, arena, {}, 0.05));
  const double heading = steer(pose, arena, {}, rng, steer_random_walk(), 0.05);
  CHECK(forward_clear(pose.pos, heading, arena, {}, 0.05));
}

TEST_CASE("steer rotates away from an obstacle dead ahead") {
  Arena arena;
  arena.obstacles.push_back({1.0, 1.0, 0.2, 0.2});
  AgentRng rng(83, 4);
  const Pose pose{{0.98, 1.1}, 0.0};  // obstacle within sensor range to the east
  CHECK_FALSE(forward_clear(pose.pos, pose.heading, arena, {}, 0.05));
  const double heading = steer(pose, arena, {}, rng, steer_random_walk(), 0.05);
  CHECK(forward_clear(pose.pos, heading, arena, {}, 0.05));
}

TEST_CASE("another robot in the path blocks the ray") {
  Arena arena;
  const std::vector<Vec2> others = {{1.04, 1.0}};
  CHECK_FALSE(forward_clear({1.0, 1.0}, 0.0, arena, others, 0.05));
  CHECK(forward_clear({1.0, 1.0}, std::numbers::pi / 2.0, arena, others, 0.05));
}

TEST_CASE("a long random walk stays inside the walls and off obstacles") {
  Arena arena;
  arena.obstacles = {{0.5, 1.0, 0.2, 0.2}, {1.4, 1.0, 0.2, 0.2},
                     {2.3, 1.9, 0.2, 0.2}};
  AgentRng rng(89, 5);
  Pose pose{{1.5, 0.5}, 0.3};
  const double speed = 0.02;
  for (int t = 0; t < 100000; ++t) {
    pose.heading = steer(pose, arena, {}, rng, steer_random_walk(), 0.05);
    const Vec2 proposed = pose.pos + unit(pose.heading) * speed;
    if (arena.inside(proposed) && !arena.in_obstacle(proposed)) {
      pose.pos = proposed;
    }
    REQUIRE(arena.inside(pose.pos));
    REQUIRE_FALSE(arena.in_obstacle(pose.pos));
  }
}
