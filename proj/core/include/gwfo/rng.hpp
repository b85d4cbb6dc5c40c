#pragma once

#include <cstdint>
#include <random>

namespace gwfo {

/// Master seed of an experiment or a single sampling call.
struct Seed {
  std::uint64_t master = 0;

  friend bool operator==(Seed, Seed) = default;
};

/// Documented default master seed for reproducible runs.
inline constexpr Seed kDefaultSeed{0xC0FFEE};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of trial `trial` under `master`: splitmix64(master XOR trial).
/// Trials are independent of evaluation order.
Seed derive_trial_seed(Seed master, std::uint64_t trial) noexcept;

/// Portable random stream: mt19937_64 output is fixed by the standard, and the
/// conversion to doubles is done here rather than via <random> distributions,
/// whose algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.master) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gwfo
