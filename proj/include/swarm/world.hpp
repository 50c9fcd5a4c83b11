#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "swarm/geometry.hpp"
#include "swarm/protocol.hpp"
#include "swarm/rng.hpp"

namespace swarm {

// Workers needed to cover a spot: one per 300 cm^2 of spot area, rounded up.
// Throws std::invalid_argument if area_cm2 <= 0.
int capacity_of(double area_cm2);

struct Arena {
  double width = 3.0;
  double height = 3.0;
  std::vector<Rect> obstacles;
  Vec2 charge_station{0.1, 0.1};

  bool inside(Vec2 p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  bool in_obstacle(Vec2 p) const;
};

struct Spot {
  int id = 0;
  Vec2 center;
  double side = 0.3;
  Color color = Color::kBlack;
  int capacity = 0;
  std::set<int> occupants;  // ground truth, robot ids

  bool contains(Vec2 p) const {  // closed square
    return std::abs(p.x - center.x) <= side / 2.0 &&
           std::abs(p.y - center.y) <= side / 2.0;
  }
  double area_cm2() const { return side * side * 1.0e4; }
  int free_slots() const { return capacity - static_cast<int>(occupants.size()); }
};

// Noiseless measurement of a spot: exact center, area and derived capacity.
struct SpotPerception {
  int spot_id = 0;
  Vec2 center;
  double area_cm2 = 0.0;
  Color color = Color::kBlack;
  int capacity = 0;
};

struct Station {
  int id = 0;
  Vec2 position;
  double radius = 0.0;
  PrivateMessage message;
  bool failed = false;
  bool dirty = false;  // message changed by a courier sync this tick
};

struct World {
  Arena arena;
  std::vector<Spot> spots;
  std::vector<Station> stations;

  std::optional<SpotPerception> sense_spot(Vec2 p) const;
  Spot* spot_by_id(int id);
  const Spot* spot_by_id(int id) const;
};

// Closed ball: true when distance(a, b) <= r.
bool in_range(Vec2 a, Vec2 b, double r);

// Nearest by Euclidean distance; ties go to the lowest id.
// Throws std::invalid_argument on an empty list.
const Station& nearest_station(Vec2 p, std::span<const Station> stations);

struct Pose {
  Vec2 pos;
  double heading = 0.0;
};

struct SteerGoal {
  bool has_target = false;
  Vec2 target;
};
inline SteerGoal steer_random_walk() { return {}; }
inline SteerGoal steer_go_to(Vec2 target) { return {true, target}; }

// True when nothing blocks the ray of length sensor_range ahead of pos:
// the probe stays inside the walls, off every obstacle, and no other robot
// sits within clearance of the ray.
bool forward_clear(Vec2 pos, double heading, const Arena& arena,
                   std::span<const Vec2> other_robots, double sensor_range);

// Next heading for one tick of motion. Random walk perturbs the current
// heading by up to +/-15 degrees; go-to aims straight at the target. Either
// way, while the forward ray is blocked the heading is rotated away by a
// uniform 90-180 degrees, up to a bounded number of tries.
double steer(const Pose& pose, const Arena& arena,
             std::span<const Vec2> other_robots, AgentRng& rng,
             const SteerGoal& goal, double sensor_range);

}  // namespace swarm
