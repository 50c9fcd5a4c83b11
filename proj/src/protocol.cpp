#include "swarm/protocol.hpp"

#include <cmath>
#include <string>

#include "swarm/world.hpp"

namespace swarm {

Color color_from_int(int v) {
  if (v != 0 && v != 1) {
    throw std::invalid_argument("color code must be 0 (black) or 1 (green), got " +
                                std::to_string(v));
  }
  return static_cast<Color>(v);
}

SpotKey spot_key(double x, double y) {
  return {static_cast<int>(std::lround(x / kSpotKeyQuantum)),
          static_cast<int>(std::lround(y / kSpotKeyQuantum))};
}

const SpotRow* PrivateMessage::find(SpotKey key) const {
  for (const auto& [k, row] : rows_) {
    if (k == key) return &row;
  }
  return nullptr;
}

SpotRow* PrivateMessage::find(SpotKey key) {
  for (auto& [k, row] : rows_) {
    if (k == key) return &row;
  }
  return nullptr;
}

void PrivateMessage::insert(SpotKey key, const SpotRow& row) {
  if (contains(key)) {
    throw std::invalid_argument("duplicate spot key in message");
  }
  rows_.emplace_back(key, row);
}

SpotRow new_row(Vec2 center, double area_cm2, Color color, Tick now) {
  const int capacity = capacity_of(area_cm2);  // rejects area_cm2 <= 0
  SpotRow row;
  row.center = center;
  row.z = 0.0;
  row.capacity = capacity;
  row.deployed = 0;
  row.needed = capacity;
  row.hops = 0;
  row.time = now;
  row.color = color;
  return row;
}

SpotRow apply_arrival(SpotRow row, Tick now) {
  if (row.needed < 1) {
    throw SpotFullError("spot already at capacity (" +
                        std::to_string(row.capacity) + " deployed)");
  }
  row.needed -= 1;
  row.deployed += 1;
  row.time = now;
  return row;
}

MergeStats merge_into(PrivateMessage& mine, const PrivateMessage& received) {
  MergeStats stats;
  for (const auto& [key, theirs] : received) {
    SpotRow relayed = theirs;
    relayed.hops = theirs.hops + 1;
    if (SpotRow* ours = mine.find(key)) {
      if (theirs.time > ours->time) {
        *ours = relayed;
        ++stats.replaced;
      }
    } else {
      mine.insert(key, relayed);
      stats.inserted.push_back(key);
    }
  }
  return stats;
}

PrivateMessage merge(PrivateMessage mine, const PrivateMessage& received) {
  merge_into(mine, received);
  return mine;
}

WireFrame to_wire(const PrivateMessage& msg, int slot_count) {
  if (slot_count < 0 || msg.size() > static_cast<std::size_t>(slot_count)) {
    throw WireError("message has " + std::to_string(msg.size()) +
                    " rows, frame holds " + std::to_string(slot_count));
  }
  WireFrame frame;
  frame.slots.assign(static_cast<std::size_t>(slot_count), WireSlot{});
  std::size_t i = 0;
  for (const auto& [key, row] : msg) {
    (void)key;
    frame.slots[i++] = {1.0,
                        row.center.x,
                        row.center.y,
                        row.z,
                        static_cast<double>(row.capacity),
                        static_cast<double>(row.deployed),
                        static_cast<double>(row.needed),
                        static_cast<double>(row.hops),
                        static_cast<double>(row.time),
                        static_cast<double>(to_int(row.color))};
  }
  return frame;
}

PrivateMessage from_wire(const WireFrame& frame) {
  PrivateMessage msg;
  for (const auto& slot : frame.slots) {
    if (slot[0] == 0.0) continue;
    SpotRow row;
    row.center = {slot[1], slot[2]};
    row.z = slot[3];
    row.capacity = static_cast<int>(slot[4]);
    row.deployed = static_cast<int>(slot[5]);
    row.needed = static_cast<int>(slot[6]);
    row.hops = static_cast<int>(slot[7]);
    row.time = static_cast<Tick>(slot[8]);
    row.color = color_from_int(static_cast<int>(slot[9]));
    msg.insert(spot_key(row.center), row);
  }
  return msg;
}

}  // namespace swarm
