#include "swarm/decision.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace swarm {

int hop_bucket(int hops, int bucket_size) {
  if (bucket_size < 1) {
    throw std::invalid_argument("hop bucket size must be >= 1, got " +
                                std::to_string(bucket_size));
  }
  return hops / bucket_size;
}

bool saturation_risk(const SpotRow& row) {
  return std::max(row.hops - 1, 0) >= row.needed;
}

namespace {

// Strict weak ordering over the three ranking keys, ties broken by key.
bool ranked_before(const RankedCandidate& a, const RankedCandidate& b) {
  if (a.color_match != b.color_match) return a.color_match;
  if (a.bucket != b.bucket) return a.bucket < b.bucket;
  if (a.distance != b.distance) return a.distance < b.distance;
  return a.key < b.key;
}

}  // namespace

std::vector<RankedCandidate> rank(const PrivateMessage& candidates, Color target,
                                  Vec2 here, int bucket_size) {
  std::vector<RankedCandidate> out;
  out.reserve(candidates.size());
  for (const auto& [key, row] : candidates) {
    if (row.needed <= 0) continue;  // full spots are never worth targeting
    out.push_back({key, row, row.color == target,
                   hop_bucket(row.hops, bucket_size), distance(here, row.center)});
  }
  std::sort(out.begin(), out.end(), ranked_before);
  return out;
}

DecisionOutcome decide(const PrivateMessage& candidates, Color target, Vec2 here,
                       int attempts, int retry_threshold, int bucket_size) {
  if (attempts >= retry_threshold) return DecisionOutcome::return_to_charge();
  const auto ranked = rank(candidates, target, here, bucket_size);
  if (ranked.empty()) return DecisionOutcome::return_to_charge();
  return DecisionOutcome::go_to(ranked.front().key);
}

bool accept_en_route(const SpotPerception& spot, const SpotRow* known_row,
                     Color target) {
  if (spot.color != target) return false;
  if (known_row == nullptr) return spot.capacity >= 1;
  return known_row->needed >= 1 && !saturation_risk(*known_row);
}

Color resample_target(const PrivateMessage& candidates, Color current,
                      AgentRng& rng) {
  if (candidates.empty()) return current;
  int black = 0;
  for (const auto& [key, row] : candidates) {
    (void)key;
    if (row.color == Color::kBlack) ++black;
  }
  const double p_black = static_cast<double>(black) /
                         static_cast<double>(candidates.size());
  return rng.u01() < p_black ? Color::kBlack : Color::kGreen;
}

}  // namespace swarm
