#pragma once

#include <vector>

#include "swarm/protocol.hpp"
#include "swarm/rng.hpp"

namespace swarm::test {

// Random but valid row: needed + deployed = capacity, hops and time small
// enough to exercise every comparison branch.
inline SpotRow random_row(AgentRng& rng, Tick max_time = 200) {
  SpotRow row;
  row.center = {rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)};
  row.capacity = 1 + static_cast<int>(rng.u01() * 4.0);
  row.deployed = static_cast<int>(rng.u01() * (row.capacity + 1));
  if (row.deployed > row.capacity) row.deployed = row.capacity;
  row.needed = row.capacity - row.deployed;
  row.hops = static_cast<int>(rng.u01() * 12.0);
  row.time = static_cast<Tick>(rng.u01() * static_cast<double>(max_time));
  row.color = rng.u01() < 0.5 ? Color::kBlack : Color::kGreen;
  return row;
}

inline PrivateMessage random_message(AgentRng& rng, int max_rows,
                                     Tick max_time = 200) {
  PrivateMessage msg;
  const int n = static_cast<int>(rng.u01() * (max_rows + 1));
  for (int i = 0; i < n; ++i) {
    const SpotRow row = random_row(rng, max_time);
    const SpotKey key = spot_key(row.center);
    if (!msg.contains(key)) msg.insert(key, row);
  }
  return msg;
}

}  // namespace swarm::test
