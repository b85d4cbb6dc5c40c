#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gwfo/tree.hpp"

namespace gwfo {

/// Hash-consing table for AHU labels: equal labels <=> isomorphic (colored) subtrees.
///
/// One interner may be shared across several trees so labels become comparable
/// between them.
class ShapeInterner {
 public:
  std::uint32_t intern(std::uint32_t color, std::vector<std::uint32_t> sorted_children);
  std::size_t size() const noexcept { return ids_.size(); }

 private:
  std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, std::uint32_t> ids_;
};

/// Label of T(v) for every v. `colors`, when non-empty, must have one entry per
/// node and is folded into the label (used to pin selected nodes).
std::vector<std::uint32_t> subtree_labels(const RootedTree& t, ShapeInterner& interner,
                                          std::span<const std::uint32_t> colors = {});

/// Orbit ids under the automorphisms of the rooted tree that preserve `colors`.
///
/// Two nodes share an id iff some color-preserving automorphism maps one onto the
/// other. For rooted trees this reduces to comparing the label chains from the root.
std::vector<std::uint32_t> automorphism_orbits(const RootedTree& t,
                                               std::span<const std::uint32_t> colors = {});

}  // namespace gwfo
