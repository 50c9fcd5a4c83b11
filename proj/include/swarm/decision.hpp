#pragma once

#include <optional>
#include <vector>

#include "swarm/protocol.hpp"
#include "swarm/rng.hpp"
#include "swarm/world.hpp"

namespace swarm {

// Floor division of the hop count into categories of bucket_size hops.
// Throws std::invalid_argument when bucket_size < 1.
int hop_bucket(int hops, int bucket_size);

// A row's hop count estimates how many robots already know of the spot and
// could reach it first: at most hops - 1 of them. The spot risks saturation
// when that estimate covers everything it still needs.
bool saturation_risk(const SpotRow& row);

struct RankedCandidate {
  SpotKey key;
  SpotRow row;
  bool color_match = false;
  int bucket = 0;
  double distance = 0.0;
};

// Three-key ranking of the known, still-needy spots: matching color first,
// then ascending hop category, then ascending distance; ties broken by key.
// Rows with needed == 0 are dropped.
std::vector<RankedCandidate> rank(const PrivateMessage& candidates, Color target,
                                  Vec2 here, int bucket_size);

struct DecisionOutcome {
  bool go = false;  // false: return to the charge station
  SpotKey key{};

  static DecisionOutcome go_to(SpotKey k) { return {true, k}; }
  static DecisionOutcome return_to_charge() { return {}; }
  bool operator==(const DecisionOutcome&) const = default;
};

// The post-threshold decision: the top-ranked candidate, or return to charge
// when nothing ranks or the retry budget is spent.
DecisionOutcome decide(const PrivateMessage& candidates, Color target, Vec2 here,
                       int attempts, int retry_threshold, int bucket_size);

// Whether a spot stumbled into while in transit should be taken instead of
// the planned target. known_row may be null when the spot is not in the
// robot's message yet.
bool accept_en_route(const SpotPerception& spot, const SpotRow* known_row,
                     Color target);

// Attitude resampling: pick a color with probability proportional to how many
// known rows carry it. An empty message keeps the current target.
Color resample_target(const PrivateMessage& candidates, Color current,
                      AgentRng& rng);

}  // namespace swarm
