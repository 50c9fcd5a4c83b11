#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swarm/geometry.hpp"

namespace swarm {

using Tick = std::int64_t;

enum class Color : int { kBlack = 0, kGreen = 1 };

inline int to_int(Color c) { return static_cast<int>(c); }
Color color_from_int(int v);  // throws std::invalid_argument outside {0, 1}

// Spot identity as carried in messages: the quantized center coordinates.
// The quantum sits well below the spacing of distinct spots, so a perception
// error under quantum/2 cannot split one spot into two keys or alias two
// spots into one.
inline constexpr double kSpotKeyQuantum = 0.05;

struct SpotKey {
  int qx = 0;
  int qy = 0;
  auto operator<=>(const SpotKey&) const = default;
};

SpotKey spot_key(double x, double y);
inline SpotKey spot_key(Vec2 p) { return spot_key(p.x, p.y); }

// One spot's record inside a message. The serialized form carries ten fields
// per row (occupied, x, y, z, capacity, deployed, needed, hops, time, color);
// in memory the occupied flag is implicit - stored rows are always live.
struct SpotRow {
  Vec2 center;
  double z = 0.0;
  int capacity = 0;
  int deployed = 0;
  int needed = 0;
  int hops = 0;
  Tick time = 0;
  Color color = Color::kBlack;

  bool operator==(const SpotRow&) const = default;
};

// An agent's table of known spots. Keyed by SpotKey, but insertion order is
// part of the contract: rows received from a sender are appended in the
// sender's order, and the wire form serializes rows in stored order.
class PrivateMessage {
 public:
  const SpotRow* find(SpotKey key) const;
  SpotRow* find(SpotKey key);
  bool contains(SpotKey key) const { return find(key) != nullptr; }
  // key must be absent.
  void insert(SpotKey key, const SpotRow& row);
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  auto begin() const { return rows_.begin(); }
  auto end() const { return rows_.end(); }
  bool operator==(const PrivateMessage&) const = default;

 private:
  std::vector<std::pair<SpotKey, SpotRow>> rows_;
};

// Row for a freshly measured spot: full remaining capacity, zero hops,
// stamped with the current tick. Throws std::invalid_argument if area <= 0.
SpotRow new_row(Vec2 center, double area_cm2, Color color, Tick now);

struct SpotFullError : std::runtime_error {
  explicit SpotFullError(const std::string& what) : std::runtime_error(what) {}
};

// Bookkeeping when a robot enters a spot: one fewer needed, one more
// deployed, timestamp refreshed. Throws SpotFullError when needed == 0.
SpotRow apply_arrival(SpotRow row, Tick now);

struct MergeStats {
  std::vector<SpotKey> inserted;  // keys new to the receiver, sender order
  int replaced = 0;

  bool changed() const { return replaced > 0 || !inserted.empty(); }
};

// Receive-side update: unknown rows are appended in the sender's order with
// hop count incremented; known rows are replaced only by a strictly newer
// timestamp, again with the sender's hop count incremented. Ties keep ours.
MergeStats merge_into(PrivateMessage& mine, const PrivateMessage& received);
PrivateMessage merge(PrivateMessage mine, const PrivateMessage& received);

// Wire form: a frame of N fixed slots, each slot the ten fields in the order
// (occupied, x, y, z, capacity, deployed, needed, hops, time, color). Unused
// slots are all zeros.
struct WireError : std::runtime_error {
  explicit WireError(const std::string& what) : std::runtime_error(what) {}
};

using WireSlot = std::array<double, 10>;

struct WireFrame {
  std::vector<WireSlot> slots;
};

// Throws WireError when the message holds more rows than slot_count.
WireFrame to_wire(const PrivateMessage& msg, int slot_count);
PrivateMessage from_wire(const WireFrame& frame);

}  // namespace swarm
