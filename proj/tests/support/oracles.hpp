#pragma once

// Brute-force reference implementations shared by the unit and acceptance tests.

#include <cstdint>
#include <string>
#include <vector>

#include <gwfo/logic.hpp>
#include <gwfo/rng.hpp>
#include <gwfo/tree.hpp>

namespace gwfo::oracle {

/// All rooted trees with exactly n nodes, one per isomorphism class.
std::vector<RootedTree> all_trees(std::size_t n);

/// All rooted trees with 1..max_nodes nodes.
std::vector<RootedTree> all_trees_up_to(std::size_t max_nodes);

/// Tries every root-preserving bijection. Only for small trees.
bool brute_isomorphic(const RootedTree& a, const RootedTree& b);

/// Plain recursive EF game: after the pre-picked pair, Spoiler may pick any
/// node on either side, Duplicator any node on the other; positions are never
/// cached or pruned. Without `distances` the roots must correspond (the R
/// constant); with it, every pairwise distance must match instead.
bool naive_duplicator_wins(const RootedTree& t1, NodeId start1, const RootedTree& t2, NodeId start2,
                           std::uint32_t rounds, bool distances);

/// Random standard-dialect sentence with quantifier depth at most `depth`.
Formula random_sentence(Rng& rng, std::uint32_t depth);

/// Trees of a Poisson(lambda) process, each truncated to `budget` draws.
std::vector<RootedTree> sampled_trees(double lambda, std::size_t budget, std::size_t count, Seed seed);

}  // namespace gwfo::oracle

namespace gwfo::oracle {

/// True when the draws (X_1, X_2, ...) either terminate the tree or contain a
/// node whose whole subtree has been drawn and is isomorphic to `pattern`.
/// Independent of the library's tree and isomorphism code.
bool prefix_forces_containment(const std::vector<std::uint32_t>& draws, const RootedTree& pattern);

}  // namespace gwfo::oracle
