#include "gwfo/universal.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <chrono>
#include <fmt/format.h>
#include <functional>
#include <stdexcept>

#include "gwfo/games.hpp"
#include "gwfo/iso.hpp"

namespace gwfo {

std::uint64_t pow3(std::uint32_t n) {
  if (n > 40) throw std::overflow_error("3^n overflows");
  std::uint64_t out = 1;
  for (std::uint32_t i = 0; i < n; ++i) out *= 3;
  return out;
}

std::uint32_t catalog_radius(std::uint32_t k) { return static_cast<std::uint32_t>(pow3(k + 1)); }
std::uint32_t catalog_distance_bound(std::uint32_t k) { return 2 * catalog_radius(k); }

namespace {

std::uint32_t separation(std::uint32_t k) { return static_cast<std::uint32_t>(pow3(k + 2)); }

// Undirected BFS distances from `src` to every node.
std::vector<std::uint32_t> distances_from(const RootedTree& t, NodeId src) {
  constexpr auto kUnseen = ~std::uint32_t{0};
  std::vector<std::uint32_t> dist(t.size(), kUnseen);
  std::vector<NodeId> queue{src};
  dist[src.index] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    auto visit = [&](NodeId w) {
      if (dist[w.index] != kUnseen) return;
      dist[w.index] = dist[v.index] + 1;
      queue.push_back(w);
    };
    if (const auto p = t.parent(v)) visit(*p);
    for (NodeId c : t.children(v)) visit(c);
  }
  return dist;
}

// candidates[e]: nodes deeper than 3^{k+2} whose ball is equivalent to entry e.
std::vector<std::vector<NodeId>> find_candidates(const RootedTree& t, const BallCatalog& catalog) {
  const auto r = catalog_radius(catalog.k);
  const auto m = catalog_distance_bound(catalog.k);
  const auto sep = separation(catalog.k);
  std::vector<std::vector<NodeId>> out(catalog.entries.size());
  for (std::uint32_t v = 0; v < t.size(); ++v) {
    if (t.depth(NodeId{v}) <= sep) continue;
    const Ball b = ball(t, NodeId{v}, r);
    for (std::size_t e = 0; e < catalog.entries.size(); ++e)
      if (balls_equivalent(b, catalog.entries[e], catalog.k, m)) out[e].push_back(NodeId{v});
  }
  return out;
}

}  // namespace

void validate_catalog(const BallCatalog& catalog) {
  if (catalog.k == 0) throw std::invalid_argument("catalog parameter k must be at least 1");
  const auto r = catalog_radius(catalog.k);
  const auto m = catalog_distance_bound(catalog.k);
  for (std::size_t i = 0; i < catalog.entries.size(); ++i)
    if (catalog.entries[i].radius != r)
      throw std::invalid_argument(
          fmt::format("catalog entry {} has radius {}, expected {}", i, catalog.entries[i].radius, r));
  for (std::size_t i = 0; i < catalog.entries.size(); ++i)
    for (std::size_t j = i + 1; j < catalog.entries.size(); ++j)
      if (balls_equivalent(catalog.entries[i], catalog.entries[j], catalog.k, m))
        throw std::invalid_argument(fmt::format("catalog entries {} and {} are equivalent", i, j));
}

BallCatalog catalog_from_balls(std::uint32_t k, std::span<const Ball> balls) {
  BallCatalog out{k, {}};
  const auto r = catalog_radius(k);
  const auto m = catalog_distance_bound(k);
  for (const Ball& b : balls) {
    if (b.radius != r) throw std::invalid_argument(fmt::format("ball radius {} differs from {}", b.radius, r));
    const bool known = std::any_of(out.entries.begin(), out.entries.end(),
                                   [&](const Ball& e) { return balls_equivalent(b, e, k, m); });
    if (!known) out.entries.push_back(b);
  }
  return out;
}

ChristmasTree build_christmas_tree(const BallCatalog& catalog, std::optional<std::uint32_t> copies) {
  validate_catalog(catalog);
  const std::uint32_t k = catalog.k;
  const std::uint64_t reach = pow3(k + 4) + pow3(k + 1);
  ChristmasTree out;
  out.k = k;
  TreeBuilder b;
  const NodeId root = b.add_root();
  for (const Ball& entry : catalog.entries) {
    std::vector<NodeId> centers, tops;
    for (std::uint32_t c = 0; c < copies.value_or(k); ++c) {
      // Path root -> ... -> top of length reach - depth(center in ball).
      const std::uint64_t string_length = reach - entry.center_depth();
      NodeId at = root;
      for (std::uint64_t i = 1; i < string_length; ++i) at = b.add_child(at);
      std::vector<NodeId> image;
      tops.push_back(b.graft(at, entry.tree, &image));
      centers.push_back(image[entry.center.index]);
    }
    out.centers.push_back(std::move(centers));
    out.tops.push_back(std::move(tops));
  }
  out.tree = b.build();
  return out;
}

Point1Report check_point1(const RootedTree& t, const BallCatalog& catalog) {
  Point1Report report;
  const std::uint32_t k = catalog.k;
  const auto sep = separation(k);
  const auto candidates = find_candidates(t, catalog);
  for (std::size_t e = 0; e < candidates.size(); ++e) {
    if (candidates[e].size() < k) {
      report.missing_entry = e;
      report.diagnosis = fmt::format("catalog entry {} has {} equivalent ball(s) deeper than {}, needs {}", e,
                                     candidates[e].size(), sep, k);
      return report;
    }
  }

  // Backtracking over slots (entry, copy) with the pairwise separation constraint.
  const std::size_t slots = candidates.size() * k;
  std::vector<NodeId> chosen;
  std::size_t deepest_failure = 0;
  std::function<bool(std::size_t)> fill = [&](std::size_t slot) {
    if (slot == slots) return true;
    deepest_failure = std::max(deepest_failure, slot);
    const auto& pool = candidates[slot / k];
    for (NodeId c : pool) {
      const bool far = std::all_of(chosen.begin(), chosen.end(),
                                   [&](NodeId w) { return undirected_distance(t, c, w) > sep; });
      if (!far) continue;
      chosen.push_back(c);
      if (fill(slot + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!fill(0)) {
    report.missing_entry = deepest_failure / k;
    report.diagnosis = fmt::format("no separated choice of {} witnesses for catalog entry {}", k, deepest_failure / k);
    return report;
  }
  report.ok = true;
  for (std::size_t e = 0; e < candidates.size(); ++e)
    report.witnesses.emplace_back(chosen.begin() + static_cast<std::ptrdiff_t>(e * k),
                                  chosen.begin() + static_cast<std::ptrdiff_t>((e + 1) * k));
  return report;
}

Point2Report check_point2(const RootedTree& t, const BallCatalog& catalog) {
  Point2Report report;
  const std::uint32_t k = catalog.k;
  const auto sep = separation(k);
  const auto candidates = find_candidates(t, catalog);

  std::vector<NodeId> flat;
  std::vector<std::pair<std::size_t, std::size_t>> range;  // per entry [begin, end) into flat
  for (const auto& pool : candidates) {
    range.emplace_back(flat.size(), flat.size() + pool.size());
    flat.insert(flat.end(), pool.begin(), pool.end());
  }
  for (std::size_t e = 0; e < candidates.size(); ++e) {
    if (candidates[e].empty()) {
      report.blocked_entry = e;
      report.diagnosis = fmt::format("catalog entry {} has no equivalent ball deeper than {}", e, sep);
      return report;
    }
  }

  // blocked[u]: candidates within distance 3^{k+2} of u.
  using Bits = boost::dynamic_bitset<>;
  std::vector<Bits> blocked(t.size(), Bits(flat.size()));
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const auto dist = distances_from(t, flat[i]);
    for (std::uint32_t u = 0; u < t.size(); ++u)
      if (dist[u] <= sep) blocked[u].set(i);
  }
  // Keep one node per maximal blocked set.
  std::vector<std::uint32_t> order(t.size());
  for (std::uint32_t u = 0; u < t.size(); ++u) order[u] = u;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return blocked[a].count() > blocked[b].count(); });
  std::vector<std::uint32_t> moves;
  for (auto u : order) {
    if (blocked[u].none()) break;
    const bool dominated =
        std::any_of(moves.begin(), moves.end(), [&](auto w) { return blocked[u].is_subset_of(blocked[w]); });
    if (!dominated) moves.push_back(u);
  }

  auto exhausted_entry = [&](const Bits& used) -> std::optional<std::size_t> {
    for (std::size_t e = 0; e < range.size(); ++e) {
      bool free = false;
      for (std::size_t i = range[e].first; i < range[e].second && !free; ++i) free = !used.test(i);
      if (!free) return e;
    }
    return std::nullopt;
  };

  std::vector<std::uint32_t> prefix;
  std::function<bool(std::size_t, const Bits&)> search = [&](std::size_t from, const Bits& used) {
    if (const auto e = exhausted_entry(used)) {
      report.blocked_entry = e;
      for (auto u : prefix) report.blocking_prefix.push_back(NodeId{u});
      return false;
    }
    if (prefix.size() + 1 >= k) return true;
    for (std::size_t i = from; i < moves.size(); ++i) {
      prefix.push_back(moves[i]);
      const bool ok = search(i + 1, used | blocked[moves[i]]);
      prefix.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  if (!search(0, Bits(flat.size()))) {
    report.diagnosis = fmt::format("{} chosen node(s) leave catalog entry {} without a separated witness",
                                   report.blocking_prefix.size(), *report.blocked_entry);
    return report;
  }
  report.ok = true;
  return report;
}

Point2Report check_point2(const ChristmasTree& xmas, const BallCatalog& catalog) {
  Point2Report report;
  report.certificate = true;
  const auto& t = xmas.tree;
  const std::uint32_t k = catalog.k;
  const auto sep = separation(k);
  const auto r = catalog_radius(k);
  const auto m = catalog_distance_bound(k);
  if (xmas.k != k || xmas.centers.size() != catalog.entries.size()) {
    report.diagnosis = "tree was not built from this catalog";
    return report;
  }
  auto branch_of = [&](NodeId v) {
    while (t.parent(v) && *t.parent(v) != t.root()) v = *t.parent(v);
    return v;
  };
  for (std::size_t e = 0; e < xmas.centers.size(); ++e) {
    const auto& copies = xmas.centers[e];
    std::vector<NodeId> branches;
    for (NodeId c : copies) {
      if (t.depth(c) <= sep) {
        report.blocked_entry = e;
        report.diagnosis = fmt::format("copy of entry {} sits at depth {} <= {}", e, t.depth(c), sep);
        return report;
      }
      if (!balls_equivalent(ball(t, c, r), catalog.entries[e], k, m)) {
        report.blocked_entry = e;
        report.diagnosis = fmt::format("copy of entry {} at node {} is not equivalent to the entry", e, c.index);
        return report;
      }
      branches.push_back(branch_of(c));
    }
    std::sort(branches.begin(), branches.end());
    branches.erase(std::unique(branches.begin(), branches.end()), branches.end());
    if (branches.size() < k) {
      report.blocked_entry = e;
      report.diagnosis = fmt::format("entry {} has copies on {} distinct branch(es), needs {}", e, branches.size(), k);
      return report;
    }
  }
  report.ok = true;
  return report;
}

SpotCheckReport universality_spot_check(const RootedTree& universal, std::uint32_t k,
                                        std::span<const std::pair<RootedTree, RootedTree>> pairs,
                                        SpotCheckOptions options) {
  SpotCheckReport report;
  const auto r = catalog_radius(k);
  const auto m = catalog_distance_bound(k);
  const auto sep = separation(k);
  const auto start = std::chrono::steady_clock::now();

  auto deep_copy = [&](const RootedTree& t) {
    ShapeInterner interner;
    const auto target = subtree_labels(universal, interner)[universal.root().index];
    const auto labels = subtree_labels(t, interner);
    for (std::uint32_t v = 0; v < t.size(); ++v)
      if (labels[v] == target && t.depth(NodeId{v}) > sep) return true;
    return false;
  };

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > options.time_limit_seconds) {
      report.skipped = pairs.size() - i;
      break;
    }
    const auto& [t1, t2] = pairs[i];
    if (!balls_equivalent(ball(t1, t1.root(), r), ball(t2, t2.root(), r), k, m)) {
      ++report.rejected;
      report.rejections.push_back(fmt::format("pair {}: root balls of radius {} are not equivalent", i, r));
      continue;
    }
    if (!deep_copy(t1) || !deep_copy(t2)) {
      ++report.rejected;
      report.rejections.push_back(
          fmt::format("pair {}: tree {} has no copy of the universal tree deeper than {}", i, deep_copy(t1) ? 2 : 1, sep));
      continue;
    }
    ++report.accepted;
    if (ehr_standard(t1, t2, k) == GameVerdict::Duplicator)
      ++report.duplicator_wins;
    else
      report.counterexamples.push_back(i);
  }
  return report;
}

}  // namespace gwfo
