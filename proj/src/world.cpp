#include "swarm/world.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swarm {

int capacity_of(double area_cm2) {
  if (!(area_cm2 > 0.0)) {
    throw std::invalid_argument("spot area must be positive, got " +
                                std::to_string(area_cm2));
  }
  // Small slack so 0.3 m sides measured as 899.999... or 900.000...1 cm^2
  // both land on exactly 3.
  return static_cast<int>(std::ceil(area_cm2 / 300.0 - 1e-9));
}

bool Arena::in_obstacle(Vec2 p) const {
  for (const auto& r : obstacles) {
    if (r.contains(p)) return true;
  }
  return false;
}

std::optional<SpotPerception> World::sense_spot(Vec2 p) const {
  for (const auto& s : spots) {
    if (s.contains(p)) {
      return SpotPerception{s.id, s.center, s.area_cm2(), s.color, s.capacity};
    }
  }
  return std::nullopt;
}

Spot* World::spot_by_id(int id) {
  for (auto& s : spots) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const Spot* World::spot_by_id(int id) const {
  for (const auto& s : spots) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

bool in_range(Vec2 a, Vec2 b, double r) { return distance(a, b) <= r; }

const Station& nearest_station(Vec2 p, std::span<const Station> stations) {
  if (stations.empty()) {
    throw std::invalid_argument("no stations configured");
  }
  const Station* best = &stations[0];
  double best_d = distance(p, best->position);
  for (const auto& st : stations.subspan(1)) {
    const double d = distance(p, st.position);
    if (d < best_d || (d == best_d && st.id < best->id)) {
      best = &st;
      best_d = d;
    }
  }
  return *best;
}

namespace {
constexpr double kRobotClearance = 0.02;  // lateral clearance to other robots
constexpr int kMaxAvoidTries = 16;
}  // namespace

bool forward_clear(Vec2 pos, double heading, const Arena& arena,
                   std::span<const Vec2> other_robots, double sensor_range) {
  const Vec2 probe = pos + unit(heading) * sensor_range;
  if (!arena.inside(probe) || arena.in_obstacle(probe)) return false;
  for (const Vec2& other : other_robots) {
    if (other == pos) continue;  // self entry, if present
    if (ray_point_distance(pos, heading, sensor_range, other) <= kRobotClearance) {
      return false;
    }
  }
  return true;
}

double steer(const Pose& pose, const Arena& arena,
             std::span<const Vec2> other_robots, AgentRng& rng,
             const SteerGoal& goal, double sensor_range) {
  constexpr double kJitter = 15.0 * std::numbers::pi / 180.0;

  double heading = goal.has_target ? heading_to(pose.pos, goal.target)
                                   : pose.heading + rng.uniform(-kJitter, kJitter);
  heading = normalize_angle(heading);

  for (int i = 0; i < kMaxAvoidTries; ++i) {
    if (forward_clear(pose.pos, heading, arena, other_robots, sensor_range)) {
      return heading;
    }
    heading = normalize_angle(
        heading + rng.sign() * rng.uniform(std::numbers::pi / 2.0, std::numbers::pi));
  }
  // Boxed in; the engine will refuse the move anyway.
  return heading;
}

}  // namespace swarm
