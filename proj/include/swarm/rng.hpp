#pragma once

#include <cstdint>
#include <random>

namespace swarm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One random stream per agent, derived from (run seed, stream id). Streams are
// independent: adding or removing an agent never perturbs another agent's draws.
// Doubles are extracted from raw engine bits instead of std::uniform_real_distribution,
// so the sequence is identical across standard library implementations.
class AgentRng {
 public:
  AgentRng(std::uint64_t run_seed, std::uint64_t stream_id)
      : engine_(splitmix64(splitmix64(run_seed) ^
                           (stream_id * 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  double sign() { return u01() < 0.5 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace swarm
