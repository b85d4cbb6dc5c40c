#include "gwfo/iso.hpp"

#include <algorithm>

namespace gwfo {

std::uint32_t ShapeInterner::intern(std::uint32_t color, std::vector<std::uint32_t> sorted_children) {
  const auto next = static_cast<std::uint32_t>(ids_.size());
  return ids_.try_emplace({color, std::move(sorted_children)}, next).first->second;
}

std::vector<std::uint32_t> subtree_labels(const RootedTree& t, ShapeInterner& interner,
                                          std::span<const std::uint32_t> colors) {
  const auto order = t.bfs_order();
  std::vector<std::uint32_t> label(t.size(), 0);
  std::vector<std::uint32_t> kids;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    kids.clear();
    for (NodeId c : t.children(*it)) kids.push_back(label[c.index]);
    std::sort(kids.begin(), kids.end());
    label[it->index] = interner.intern(colors.empty() ? 0 : colors[it->index], kids);
  }
  return label;
}

std::vector<std::uint32_t> automorphism_orbits(const RootedTree& t,
                                               std::span<const std::uint32_t> colors) {
  ShapeInterner interner;
  const auto label = subtree_labels(t, interner, colors);
  // Position label: the chain of subtree labels from the root down to v.
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> chain_ids;
  std::vector<std::uint32_t> orbit(t.size(), 0);
  constexpr std::uint32_t kNoParent = ~std::uint32_t{0};
  for (NodeId v : t.bfs_order()) {
    const auto p = t.parent(v);
    const std::pair key{p ? orbit[p->index] : kNoParent, label[v.index]};
    const auto next = static_cast<std::uint32_t>(chain_ids.size());
    orbit[v.index] = chain_ids.try_emplace(key, next).first->second;
  }
  return orbit;
}

}  // namespace gwfo
