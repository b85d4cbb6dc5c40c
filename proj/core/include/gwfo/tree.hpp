#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gwfo {

/// Dense index of a node inside one RootedTree.
struct NodeId {
  std::uint32_t index = 0;

  friend auto operator<=>(NodeId, NodeId) = default;
};

/// Thrown by the parenthesis-format parsers; carries the byte offset of the fault.
class TreeParseError : public std::runtime_error {
 public:
  TreeParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Immutable rooted tree stored as an arena of nodes.
///
/// Child lists are ordered but nothing in the library depends on that order;
/// canonical_form() is the notion of identity. Depths are precomputed at
/// construction so distance queries only walk ancestor chains.
class RootedTree {
 public:
  /// Builds from a parent array; exactly one entry must be nullopt (the root).
  /// Throws std::invalid_argument when the array does not describe a tree.
  static RootedTree from_parents(std::span<const std::optional<NodeId>> parents);

  /// Single-node tree.
  static RootedTree singleton();

  std::size_t size() const noexcept { return parent_.size(); }
  NodeId root() const noexcept { return root_; }
  bool valid(NodeId v) const noexcept { return v.index < parent_.size(); }

  std::optional<NodeId> parent(NodeId v) const { return parent_.at(v.index); }
  std::span<const NodeId> children(NodeId v) const;
  std::size_t child_count(NodeId v) const { return child_count_.at(v.index); }
  std::uint32_t depth(NodeId v) const { return depth_.at(v.index); }

  /// d(T): largest node depth.
  std::uint32_t height() const noexcept { return height_; }

  /// True iff `a` is the parent of `b`.
  bool is_parent(NodeId a, NodeId b) const;

  /// Node ids in breadth-first order from the root.
  std::vector<NodeId> bfs_order() const;

 private:
  RootedTree() = default;

  std::vector<std::optional<NodeId>> parent_;
  std::vector<std::uint32_t> child_begin_;
  std::vector<std::uint32_t> child_count_;
  std::vector<NodeId> child_pool_;
  std::vector<std::uint32_t> depth_;
  std::uint32_t height_ = 0;
  NodeId root_{};
};

/// Incremental construction helper; node ids are assigned in creation order.
class TreeBuilder {
 public:
  NodeId add_root();
  NodeId add_child(NodeId parent);
  /// Appends a copy of `sub` below `parent` and returns the id of the copied root.
  /// `image`, when given, receives the new id of every node of `sub`.
  NodeId graft(NodeId parent, const RootedTree& sub, std::vector<NodeId>* image = nullptr);
  std::size_t size() const noexcept { return parents_.size(); }
  RootedTree build() const;

 private:
  std::vector<std::optional<NodeId>> parents_;
};

/// Radius-bounded neighbourhood extracted from an ambient tree.
///
/// `tree` is the induced structure rooted at the ball's top vertex, so
/// `top == tree.root()` always holds. `origin[i]` is the ambient id of ball node i
/// (empty for balls read from files).
struct Ball {
  RootedTree tree = RootedTree::singleton();
  NodeId center{};
  std::uint32_t radius = 1;
  NodeId top{};
  std::vector<NodeId> origin;

  /// Wraps a standalone tree as a ball; every node must lie at distance < radius from center.
  static Ball from_tree(RootedTree tree, NodeId center, std::uint32_t radius);

  /// Distance from the top vertex down to the center.
  std::uint32_t center_depth() const { return tree.depth(center); }
};

/// T|_n: keeps generations 0..n. Nodes are renumbered in BFS order.
RootedTree truncate(const RootedTree& t, std::uint32_t generations);

/// AHU balanced-parenthesis string with children sorted lexicographically.
std::string canonical_form(const RootedTree& t);

/// Canonical string of T(v).
std::string canonical_form(const RootedTree& t, NodeId v);

/// T(v) as a standalone tree.
RootedTree subtree(const RootedTree& t, NodeId v);

/// Some v with T(v) isomorphic to `pattern`, or nullopt.
std::optional<NodeId> subtree_contains(const RootedTree& t, const RootedTree& pattern);

/// Path length between u and v ignoring edge direction.
std::uint32_t undirected_distance(const RootedTree& t, NodeId u, NodeId v);

/// All-pairs undirected distances, row-major n*n.
std::vector<std::uint32_t> distance_matrix(const RootedTree& t);

/// B_T(v; r) = { u : d(u, v) < r }.
Ball ball(const RootedTree& t, NodeId v, std::uint32_t radius);

/// Parses one tree in parenthesis format. Node ids follow the order of the
/// opening parentheses in the text (preorder); whitespace is ignored.
RootedTree parse_tree(std::string_view text);

/// One tree per non-blank line.
std::vector<RootedTree> parse_trees(std::string_view text);

/// Canonical parenthesis text.
std::string serialize_tree(const RootedTree& t);

/// Parenthesis text in stored child order, so parse_tree numbers the nodes in
/// preorder. `text_id`, when given, receives the id node v gets on re-parsing.
std::string serialize_tree_ordered(const RootedTree& t, std::vector<NodeId>* text_id = nullptr);

/// Tree text where one node is flagged with '*' right after its opening
/// parenthesis, e.g. "((*)())" marks the first child. Used for ball files.
struct MarkedTree {
  RootedTree tree;
  NodeId marked;
};
MarkedTree parse_marked_tree(std::string_view text);
std::string serialize_marked_tree(const RootedTree& t, NodeId marked);

/// Shape helpers used by tests, examples and the CLI.
RootedTree make_path(std::size_t nodes);
RootedTree make_star(std::size_t leaves);

}  // namespace gwfo
