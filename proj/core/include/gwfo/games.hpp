#pragma once

#include <cstdint>
#include <string_view>

#include "gwfo/tree.hpp"

namespace gwfo {

enum class GameVerdict { Duplicator, Spoiler };

std::string_view to_string(GameVerdict v) noexcept;

/// Search switches; both default on. Turning them off gives the plain
/// exhaustive search, which tests use as an oracle for the pruned one.
struct GameOptions {
  /// Consider one node per automorphism orbit of the current position.
  bool orbit_pruning = true;
  /// Cache verdicts of positions (pick-pair set, rounds left).
  bool memoize = true;
};

/// EHR[T1, T2; k]. Duplicator must keep equality, the parent relation and the
/// root constant in correspondence across all k rounds.
GameVerdict ehr_standard(const RootedTree& t1, const RootedTree& t2, std::uint32_t k,
                         GameOptions options = {});

/// EHR_M[B1, B2; k]: round zero picks the two centers, then k rounds in which
/// Duplicator must also match every pairwise distance. Distances are taken in
/// the ball trees themselves and compared exactly; `max_distance` (M) only
/// needs to be at least 1.
GameVerdict ehr_ball(const Ball& b1, const Ball& b2, std::uint32_t k, std::uint32_t max_distance,
                     GameOptions options = {});

/// Shorthand for ehr_ball(...) == Duplicator.
bool balls_equivalent(const Ball& b1, const Ball& b2, std::uint32_t k, std::uint32_t max_distance);

}  // namespace gwfo
