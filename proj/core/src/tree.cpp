#include "gwfo/tree.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>

#include "gwfo/iso.hpp"

namespace gwfo {

TreeParseError::TreeParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(fmt::format("{} at byte {}", what, offset)), offset_(offset) {}

RootedTree RootedTree::from_parents(std::span<const std::optional<NodeId>> parents) {
  const std::size_t n = parents.size();
  if (n == 0) throw std::invalid_argument("tree must have at least one node");
  if (n >= std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("tree too large");

  RootedTree t;
  t.parent_.assign(parents.begin(), parents.end());
  t.child_count_.assign(n, 0);
  std::optional<NodeId> root;
  for (std::size_t i = 0; i < n; ++i) {
    if (!parents[i]) {
      if (root) throw std::invalid_argument("more than one node without a parent");
      root = NodeId{static_cast<std::uint32_t>(i)};
      continue;
    }
    if (parents[i]->index >= n) throw std::invalid_argument("parent index out of range");
    ++t.child_count_[parents[i]->index];
  }
  if (!root) throw std::invalid_argument("no root: parent relation has a cycle");
  t.root_ = *root;

  t.child_begin_.assign(n, 0);
  std::uint32_t offset = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t.child_begin_[i] = offset;
    offset += t.child_count_[i];
  }
  t.child_pool_.resize(offset);
  std::vector<std::uint32_t> fill(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!parents[i]) continue;
    const auto p = parents[i]->index;
    t.child_pool_[t.child_begin_[p] + fill[p]++] = NodeId{static_cast<std::uint32_t>(i)};
  }

  // Every node must be reachable from the root, otherwise some component is a cycle.
  t.depth_.assign(n, 0);
  std::vector<NodeId> queue{t.root_};
  queue.reserve(n);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId c : t.children(v)) {
      t.depth_[c.index] = t.depth_[v.index] + 1;
      t.height_ = std::max(t.height_, t.depth_[c.index]);
      queue.push_back(c);
    }
  }
  if (queue.size() != n) throw std::invalid_argument("parent relation is not connected/acyclic");
  return t;
}

RootedTree RootedTree::singleton() {
  const std::optional<NodeId> parents[1] = {std::nullopt};
  return from_parents(parents);
}

std::span<const NodeId> RootedTree::children(NodeId v) const {
  return {child_pool_.data() + child_begin_.at(v.index), child_count_.at(v.index)};
}

bool RootedTree::is_parent(NodeId a, NodeId b) const {
  const auto& p = parent_.at(b.index);
  return p && *p == a;
}

std::vector<NodeId> RootedTree::bfs_order() const {
  std::vector<NodeId> order{root_};
  order.reserve(size());
  for (std::size_t head = 0; head < order.size(); ++head)
    for (NodeId c : children(order[head])) order.push_back(c);
  return order;
}

NodeId TreeBuilder::add_root() {
  if (!parents_.empty()) throw std::logic_error("root already added");
  parents_.push_back(std::nullopt);
  return NodeId{0};
}

NodeId TreeBuilder::add_child(NodeId parent) {
  if (parent.index >= parents_.size()) throw std::out_of_range("unknown parent");
  parents_.push_back(parent);
  return NodeId{static_cast<std::uint32_t>(parents_.size() - 1)};
}

NodeId TreeBuilder::graft(NodeId parent, const RootedTree& sub, std::vector<NodeId>* image) {
  std::vector<NodeId> local;
  auto& map = image ? *image : local;
  map.assign(sub.size(), NodeId{});
  for (NodeId v : sub.bfs_order()) {
    const auto p = sub.parent(v);
    map[v.index] = add_child(p ? map[p->index] : parent);
  }
  return map[sub.root().index];
}

RootedTree TreeBuilder::build() const { return RootedTree::from_parents(parents_); }

Ball Ball::from_tree(RootedTree tree, NodeId center, std::uint32_t radius) {
  if (!tree.valid(center)) throw std::invalid_argument("ball center out of range");
  if (radius == 0) throw std::invalid_argument("ball radius must be positive");
  const auto dist = distance_matrix(tree);
  const std::size_t n = tree.size();
  for (std::size_t u = 0; u < n; ++u)
    if (dist[center.index * n + u] >= radius)
      throw std::invalid_argument(
          fmt::format("node {} lies at distance {} >= radius {}", u, dist[center.index * n + u], radius));
  Ball b;
  b.top = tree.root();
  b.tree = std::move(tree);
  b.center = center;
  b.radius = radius;
  return b;
}

namespace {

// Induced subtree on the nodes accepted by `keep`, which must be closed under
// taking parents up to `top`. Renumbers in BFS order; `origin` maps back.
template <class Keep>
RootedTree induced(const RootedTree& t, NodeId top, Keep keep, std::vector<NodeId>* origin) {
  std::vector<std::optional<NodeId>> parents{std::nullopt};
  std::vector<NodeId> order{top};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (NodeId c : t.children(order[head])) {
      if (!keep(c)) continue;
      parents.push_back(NodeId{static_cast<std::uint32_t>(head)});
      order.push_back(c);
    }
  }
  if (origin) *origin = std::move(order);
  return RootedTree::from_parents(parents);
}

std::vector<std::string> canonical_strings(const RootedTree& t, NodeId from) {
  std::vector<NodeId> order{from};
  for (std::size_t head = 0; head < order.size(); ++head)
    for (NodeId c : t.children(order[head])) order.push_back(c);
  std::vector<std::string> enc(t.size());
  std::vector<std::string> parts;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    parts.clear();
    for (NodeId c : t.children(*it)) parts.push_back(std::move(enc[c.index]));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (auto& p : parts) s += p;
    s += ')';
    enc[it->index] = std::move(s);
  }
  return enc;
}

}  // namespace

RootedTree truncate(const RootedTree& t, std::uint32_t generations) {
  return induced(t, t.root(), [&](NodeId v) { return t.depth(v) <= generations; }, nullptr);
}

std::string canonical_form(const RootedTree& t) { return canonical_form(t, t.root()); }

std::string canonical_form(const RootedTree& t, NodeId v) {
  return std::move(canonical_strings(t, v)[v.index]);
}

RootedTree subtree(const RootedTree& t, NodeId v) {
  return induced(t, v, [](NodeId) { return true; }, nullptr);
}

std::optional<NodeId> subtree_contains(const RootedTree& t, const RootedTree& pattern) {
  if (pattern.size() > t.size()) return std::nullopt;
  ShapeInterner interner;
  const auto want = subtree_labels(pattern, interner)[pattern.root().index];
  const auto labels = subtree_labels(t, interner);
  for (NodeId v : t.bfs_order())
    if (labels[v.index] == want) return v;
  return std::nullopt;
}

std::uint32_t undirected_distance(const RootedTree& t, NodeId u, NodeId v) {
  std::uint32_t d = 0;
  while (t.depth(u) > t.depth(v)) u = *t.parent(u), ++d;
  while (t.depth(v) > t.depth(u)) v = *t.parent(v), ++d;
  while (u != v) u = *t.parent(u), v = *t.parent(v), d += 2;
  return d;
}

std::vector<std::uint32_t> distance_matrix(const RootedTree& t) {
  const std::size_t n = t.size();
  std::vector<std::uint32_t> dist(n * n, 0);
  std::vector<NodeId> queue;
  std::vector<char> seen(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    queue.assign(1, NodeId{static_cast<std::uint32_t>(s)});
    seen[s] = 1;
    auto* row = dist.data() + s * n;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      auto visit = [&](NodeId w) {
        if (seen[w.index]) return;
        seen[w.index] = 1;
        row[w.index] = row[v.index] + 1;
        queue.push_back(w);
      };
      if (auto p = t.parent(v)) visit(*p);
      for (NodeId c : t.children(v)) visit(c);
    }
  }
  return dist;
}

Ball ball(const RootedTree& t, NodeId v, std::uint32_t radius) {
  if (!t.valid(v)) throw std::invalid_argument("ball center out of range");
  if (radius == 0) throw std::invalid_argument("ball radius must be positive");
  // The ancestor chain of v inside the ball ends at the top vertex.
  NodeId top = v;
  std::uint32_t up = 0;
  while (up + 1 < radius && t.parent(top)) top = *t.parent(top), ++up;

  // A node below `top` is inside iff its distance to v, via the LCA with v, is < radius.
  std::vector<std::uint32_t> dist_to_v(t.size(), 0);
  std::vector<char> on_chain(t.size(), 0);
  {
    NodeId a = v;
    std::uint32_t d = 0;
    while (true) {
      on_chain[a.index] = 1;
      dist_to_v[a.index] = d;
      if (a == top) break;
      a = *t.parent(a), ++d;
    }
  }
  Ball b;
  b.radius = radius;
  b.tree = induced(
      t, top,
      [&](NodeId c) {
        const NodeId p = *t.parent(c);
        dist_to_v[c.index] = on_chain[c.index] ? dist_to_v[c.index] : dist_to_v[p.index] + 1;
        return dist_to_v[c.index] < radius;
      },
      &b.origin);
  b.top = b.tree.root();
  for (std::size_t i = 0; i < b.origin.size(); ++i)
    if (b.origin[i] == v) b.center = NodeId{static_cast<std::uint32_t>(i)};
  return b;
}

namespace {

struct ParsedText {
  RootedTree tree;
  std::optional<NodeId> marked;
};

ParsedText parse_impl(std::string_view text, bool allow_mark) {
  std::vector<std::optional<NodeId>> parents;
  std::vector<std::uint32_t> stack;
  std::optional<NodeId> marked;
  bool closed_root = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (closed_root) throw TreeParseError("unexpected content after the root closed", i);
    if (c == '(') {
      if (parents.size() >= std::numeric_limits<std::uint32_t>::max() - 1)
        throw TreeParseError("tree too large", i);
      parents.push_back(stack.empty() ? std::nullopt : std::optional<NodeId>(NodeId{stack.back()}));
      stack.push_back(static_cast<std::uint32_t>(parents.size() - 1));
    } else if (c == ')') {
      if (stack.empty()) throw TreeParseError("unmatched ')'", i);
      stack.pop_back();
      closed_root = stack.empty();
    } else if (c == '*' && allow_mark) {
      if (stack.empty() || parents.size() - 1 != stack.back() || text[i - 1] != '(')
        throw TreeParseError("'*' must directly follow an opening parenthesis", i);
      if (marked) throw TreeParseError("more than one marked node", i);
      marked = NodeId{stack.back()};
    } else {
      throw TreeParseError(fmt::format("unexpected character '{}'", c), i);
    }
  }
  if (parents.empty()) throw TreeParseError("empty tree text", text.size());
  if (!stack.empty()) throw TreeParseError("unclosed '('", text.size());
  return {RootedTree::from_parents(parents), marked};
}

}  // namespace

RootedTree parse_tree(std::string_view text) { return parse_impl(text, false).tree; }

std::vector<RootedTree> parse_trees(std::string_view text) {
  std::vector<RootedTree> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_tree(line));
      } catch (const TreeParseError& e) {
        throw TreeParseError("malformed tree line", start + e.offset());
      }
    }
    start = end + 1;
  }
  return out;
}

std::string serialize_tree(const RootedTree& t) { return canonical_form(t); }

std::string serialize_tree_ordered(const RootedTree& t, std::vector<NodeId>* text_id) {
  std::string out;
  out.reserve(2 * t.size());
  std::vector<NodeId> ids(t.size());
  std::uint32_t next = 0;
  // Iterative preorder; a null entry on the stack closes the node below it.
  std::vector<std::optional<NodeId>> stack{t.root()};
  while (!stack.empty()) {
    const auto top = stack.back();
    stack.pop_back();
    if (!top) {
      out += ')';
      continue;
    }
    ids[top->index] = NodeId{next++};
    out += '(';
    stack.push_back(std::nullopt);
    const auto kids = t.children(*top);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  if (text_id) *text_id = std::move(ids);
  return out;
}

MarkedTree parse_marked_tree(std::string_view text) {
  auto parsed = parse_impl(text, true);
  if (!parsed.marked) throw TreeParseError("no node marked with '*'", 0);
  return {std::move(parsed.tree), *parsed.marked};
}

std::string serialize_marked_tree(const RootedTree& t, NodeId marked) {
  // The mark is part of each child's string, so sorting stays deterministic.
  if (!t.valid(marked)) throw std::invalid_argument("marked node out of range");
  std::vector<std::string> enc(t.size());
  const auto order = t.bfs_order();
  std::vector<std::string> parts;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    parts.clear();
    for (NodeId c : t.children(*it)) parts.push_back(std::move(enc[c.index]));
    std::sort(parts.begin(), parts.end());
    std::string s = *it == marked ? "(*" : "(";
    for (auto& p : parts) s += p;
    s += ')';
    enc[it->index] = std::move(s);
  }
  return enc[t.root().index];
}

RootedTree make_path(std::size_t nodes) {
  if (nodes == 0) throw std::invalid_argument("path needs at least one node");
  TreeBuilder b;
  NodeId last = b.add_root();
  for (std::size_t i = 1; i < nodes; ++i) last = b.add_child(last);
  return b.build();
}

RootedTree make_star(std::size_t leaves) {
  TreeBuilder b;
  const NodeId r = b.add_root();
  for (std::size_t i = 0; i < leaves; ++i) b.add_child(r);
  return b.build();
}

}  // namespace gwfo
