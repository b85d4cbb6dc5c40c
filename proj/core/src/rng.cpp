#include "gwfo/rng.hpp"

namespace gwfo {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Seed derive_trial_seed(Seed master, std::uint64_t trial) noexcept {
  return Seed{splitmix64(master.master ^ trial)};
}

}  // namespace gwfo
