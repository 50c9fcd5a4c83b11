#pragma once

#include <span>

#include "swarm/events.hpp"

namespace swarm {

// All metrics are pure functions of the event log; nothing is read back from
// simulator state.

// Workers whose first deploy happened while still foraging (before their
// first decision) onto a spot matching their target color at the time.
int successful_before_threshold(const EventLog& log);

// The sampling instant for the pre-threshold metrics: the tick by which every
// worker has either deployed or run its first decision, whichever came first
// per worker. Falls back to the last logged tick when no worker resolves.
Tick exp1_sample_tick(const EventLog& log);

// Distinct green spots found before the sampling instant by a worker that was
// itself hunting green at the time.
int green_spots_discovered(const EventLog& log);

// Distinct spots of the given color entered by anyone before the sampling
// instant, regardless of the discoverer's target.
int spots_entered(const EventLog& log, Color color);

// Workers sitting deployed in a green spot at the sampling instant, replayed
// from deploy/leave/failure events.
int deployed_in_green(const EventLog& log);

// Of the workers that reached their first decision without a forage deploy,
// the percentage that deployed afterwards. 100 by convention when no worker
// reached the decision step.
double absorption_percentage(const EventLog& log);

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double ci95 = 0.0;    // 1.96 * stddev / sqrt(n)
  int n = 0;
};

Stats aggregate(std::span<const double> values);

}  // namespace swarm
