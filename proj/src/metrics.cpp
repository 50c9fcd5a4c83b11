#include "swarm/metrics.hpp"

#include <cmath>
#include <map>
#include <set>

namespace swarm {

namespace {

struct WorkerTimeline {
  Tick first_deploy = -1;
  bool first_deploy_forage = false;
  bool first_deploy_matched = false;
  Tick first_decide = -1;
};

std::map<int, WorkerTimeline> worker_timelines(const EventLog& log) {
  std::map<int, WorkerTimeline> out;
  for (const Event& e : log.events) {
    if (e.agent.kind != 'w') continue;
    WorkerTimeline& t = out[e.agent.id];
    if (e.kind == EventKind::kDeploy && t.first_deploy < 0) {
      const auto& p = std::get<DeployPayload>(e.payload);
      t.first_deploy = e.tick;
      t.first_deploy_forage = p.forage_phase;
      t.first_deploy_matched = p.color == p.worker_target;
    } else if (e.kind == EventKind::kDecide && t.first_decide < 0) {
      t.first_decide = e.tick;
    }
  }
  return out;
}

}  // namespace

int successful_before_threshold(const EventLog& log) {
  int count = 0;
  for (const auto& [id, t] : worker_timelines(log)) {
    (void)id;
    if (t.first_deploy >= 0 && t.first_deploy_forage && t.first_deploy_matched) {
      ++count;
    }
  }
  return count;
}

Tick exp1_sample_tick(const EventLog& log) {
  Tick latest_resolve = -1;
  for (const auto& [id, t] : worker_timelines(log)) {
    (void)id;
    Tick resolve = -1;
    if (t.first_deploy >= 0) resolve = t.first_deploy;
    if (t.first_decide >= 0 && (resolve < 0 || t.first_decide < resolve)) {
      resolve = t.first_decide;
    }
    if (resolve > latest_resolve) latest_resolve = resolve;
  }
  if (latest_resolve >= 0) return latest_resolve;
  return log.events.empty() ? 0 : log.events.back().tick;
}

int green_spots_discovered(const EventLog& log) {
  const Tick cutoff = exp1_sample_tick(log);
  std::set<int> spots;
  for (const Event& e : log.events) {
    if (e.kind != EventKind::kDiscovery || e.tick > cutoff) continue;
    const auto& p = std::get<DiscoveryPayload>(e.payload);
    if (p.color == Color::kGreen && p.worker_target == Color::kGreen) {
      spots.insert(p.spot_id);
    }
  }
  return static_cast<int>(spots.size());
}

int spots_entered(const EventLog& log, Color color) {
  const Tick cutoff = exp1_sample_tick(log);
  std::set<int> spots;
  for (const Event& e : log.events) {
    if (e.kind != EventKind::kDiscovery || e.tick > cutoff) continue;
    const auto& p = std::get<DiscoveryPayload>(e.payload);
    if (p.color == color) spots.insert(p.spot_id);
  }
  return static_cast<int>(spots.size());
}

int deployed_in_green(const EventLog& log) {
  const Tick cutoff = exp1_sample_tick(log);
  std::map<int, Color> occupied;  // worker -> spot color
  for (const Event& e : log.events) {
    if (e.tick > cutoff) break;
    switch (e.kind) {
      case EventKind::kDeploy:
        occupied[e.agent.id] = std::get<DeployPayload>(e.payload).color;
        break;
      case EventKind::kLeave:
        occupied.erase(e.agent.id);
        break;
      case EventKind::kFailure:
        if (e.agent.kind == 'w') occupied.erase(e.agent.id);
        break;
      default:
        break;
    }
  }
  int count = 0;
  for (const auto& [id, color] : occupied) {
    (void)id;
    if (color == Color::kGreen) ++count;
  }
  return count;
}

double absorption_percentage(const EventLog& log) {
  int reached_decision = 0;
  int absorbed = 0;
  for (const auto& [id, t] : worker_timelines(log)) {
    (void)id;
    if (t.first_decide < 0) continue;
    if (t.first_deploy >= 0 && t.first_deploy < t.first_decide) continue;
    ++reached_decision;
    if (t.first_deploy >= t.first_decide && t.first_deploy >= 0) ++absorbed;
  }
  if (reached_decision == 0) return 100.0;
  return 100.0 * static_cast<double>(absorbed) /
         static_cast<double>(reached_decision);
}

Stats aggregate(std::span<const double> values) {
  Stats s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / (s.n - 1));
    s.ci95 = 1.96 * s.stddev / std::sqrt(static_cast<double>(s.n));
  }
  return s;
}

}  // namespace swarm
