#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace swarm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

// Axis-aligned rectangle (min corner + extents). Containment is closed.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  bool contains(Vec2 p) const {
    return p.x >= x && p.x <= x + w && p.y >= y && p.y <= y + h;
  }
};

// Wrap an angle into [-pi, pi).
inline double normalize_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a < 0.0) a += two_pi;
  return a - std::numbers::pi;
}

inline double heading_to(Vec2 from, Vec2 to) {
  return std::atan2(to.y - from.y, to.x - from.x);
}

inline Vec2 unit(double heading) { return {std::cos(heading), std::sin(heading)}; }

// Distance from point p to the segment starting at a, along heading, of length len.
inline double ray_point_distance(Vec2 a, double heading, double len, Vec2 p) {
  const Vec2 d = unit(heading);
  const double t = std::clamp(dot(p - a, d), 0.0, len);
  return distance(a + d * t, p);
}

}  // namespace swarm
