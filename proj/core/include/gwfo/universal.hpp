#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gwfo/tree.hpp"

namespace gwfo {

/// 3^n.
std::uint64_t pow3(std::uint32_t n);

/// Radius 3^{k+1} of catalog balls.
std::uint32_t catalog_radius(std::uint32_t k);
/// M_0 = 2 * 3^{k+1}, the distance bound of the ball game used for catalogs.
std::uint32_t catalog_distance_bound(std::uint32_t k);

/// One representative ball per ball-game class, radius 3^{k+1}.
struct BallCatalog {
  std::uint32_t k = 1;
  std::vector<Ball> entries;
};

/// Throws std::invalid_argument naming the first entry with the wrong radius
/// or the first pair of entries that are ball-game equivalent at (M_0, k).
void validate_catalog(const BallCatalog& catalog);

/// Keeps the first ball of every ball-game class among `balls`, each of which
/// must have radius 3^{k+1}.
BallCatalog catalog_from_balls(std::uint32_t k, std::span<const Ball> balls);

/// k copies of each catalog ball, each hung from a common root by its own
/// path. The path to a copy's top has length 3^{k+4} + 3^{k+1} - (depth of the
/// center inside the ball), so every center sits at distance exactly
/// 3^{k+4} + 3^{k+1} from the root.
struct ChristmasTree {
  std::uint32_t k = 1;
  RootedTree tree = RootedTree::singleton();
  /// centers[e][c]: copy c of catalog entry e.
  std::vector<std::vector<NodeId>> centers;
  std::vector<std::vector<NodeId>> tops;
};

/// Validates the catalog first. `copies` defaults to k; fewer copies are only
/// useful for exercising the checkers.
ChristmasTree build_christmas_tree(const BallCatalog& catalog, std::optional<std::uint32_t> copies = std::nullopt);

/// Point 1: for every entry, k nodes whose radius-3^{k+1} balls are equivalent
/// to it, all deeper than 3^{k+2} and pairwise further apart than 3^{k+2}.
struct Point1Report {
  bool ok = false;
  /// witnesses[e] lists the k nodes chosen for entry e when ok.
  std::vector<std::vector<NodeId>> witnesses;
  /// First entry that could not be served.
  std::optional<std::size_t> missing_entry;
  std::string diagnosis;
};

Point1Report check_point1(const RootedTree& t, const BallCatalog& catalog);

/// Point 2: for every i <= k, every choice of i-1 nodes, and every entry,
/// some node with an equivalent ball lies deeper than 3^{k+2} and further
/// than 3^{k+2} from each chosen node.
struct Point2Report {
  bool ok = false;
  /// True when the free-branch certificate was used instead of a search.
  bool certificate = false;
  /// Adversary nodes that exhaust some entry, when !ok.
  std::vector<NodeId> blocking_prefix;
  std::optional<std::size_t> blocked_entry;
  std::string diagnosis;
};

/// Exhaustive adversarial search. Nodes that block the same candidates are
/// interchangeable, so the adversary only ranges over maximal blocked sets.
Point2Report check_point2(const RootedTree& t, const BallCatalog& catalog);

/// Certificate for a Christmas tree: k copies per entry on distinct branches,
/// centers deeper than 3^{k+2} with equivalent balls. i-1 < k chosen nodes
/// touch at most i-1 branches, so each entry keeps a free copy.
Point2Report check_point2(const ChristmasTree& xmas, const BallCatalog& catalog);

struct SpotCheckOptions {
  /// Pairs left when the budget runs out are counted as skipped.
  double time_limit_seconds = 300.0;
};

struct SpotCheckReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t skipped = 0;
  std::size_t duplicator_wins = 0;
  /// Indices of accepted pairs where Spoiler won.
  std::vector<std::size_t> counterexamples;
  /// One line per rejected pair.
  std::vector<std::string> rejections;
};

/// For each pair satisfying the hypotheses (equivalent radius-3^{k+1} root
/// balls, and a copy of `universal` hanging from a node deeper than 3^{k+2} in
/// both trees) plays EHR[T1, T2; k] and records the verdict.
SpotCheckReport universality_spot_check(const RootedTree& universal, std::uint32_t k,
                                        std::span<const std::pair<RootedTree, RootedTree>> pairs,
                                        SpotCheckOptions options = {});

}  // namespace gwfo
