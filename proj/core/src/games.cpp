#include "gwfo/games.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "gwfo/iso.hpp"

namespace gwfo {

std::string_view to_string(GameVerdict v) noexcept {
  return v == GameVerdict::Duplicator ? "duplicator" : "spoiler";
}

namespace {

// One side of the board. rel(a, b) packs every atomic fact about the pair that
// the game's win condition looks at; two pairs may be matched iff their codes agree.
class Structure {
 public:
  Structure(const RootedTree& t, bool with_distance) : t_(t), with_distance_(with_distance) {
    if (with_distance) dist_ = distance_matrix(t);
  }

  const RootedTree& tree() const { return t_; }

  std::uint32_t rel(NodeId a, NodeId b) const {
    if (a == b) return 0;
    const std::uint32_t up = t_.is_parent(a, b) ? 1 : 0;
    const std::uint32_t down = t_.is_parent(b, a) ? 2 : 0;
    if (!with_distance_) return (up | down) ? up | down : 3;
    return dist_[a.index * t_.size() + b.index] * 4 + up + down;
  }

 private:
  const RootedTree& t_;
  bool with_distance_;
  std::vector<std::uint32_t> dist_;
};

class Solver {
 public:
  Solver(const Structure& left, const Structure& right, NodeId anchor_left, NodeId anchor_right,
         GameOptions options)
      : side_{&left, &right}, options_(options) {
    picks_[0].push_back(anchor_left);
    picks_[1].push_back(anchor_right);
  }

  bool duplicator_wins(std::uint32_t rounds) {
    if (rounds == 0) return true;
    // With a round left, Spoiler wins at once iff some node has a type the other side lacks.
    if (type_set(0) != type_set(1)) return false;
    if (rounds == 1) return true;

    std::vector<std::uint64_t> key;
    if (options_.memoize) {
      for (std::size_t j = 0; j < picks_[0].size(); ++j)
        key.push_back(std::uint64_t{picks_[0][j].index} << 32 | picks_[1][j].index);
      std::sort(key.begin(), key.end());
      key.push_back(rounds);
      if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    }

    const bool result = search(rounds);
    if (options_.memoize) memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  using Type = std::vector<std::uint32_t>;

  Type type_of(int s, NodeId u) const {
    Type out;
    out.reserve(picks_[s].size());
    for (NodeId x : picks_[s]) out.push_back(side_[s]->rel(u, x));
    return out;
  }

  std::set<Type> type_set(int s) const {
    std::set<Type> out;
    for (std::uint32_t v = 0; v < side_[s]->tree().size(); ++v) out.insert(type_of(s, NodeId{v}));
    return out;
  }

  std::vector<NodeId> candidates(int s) const {
    const auto& t = side_[s]->tree();
    std::vector<NodeId> out;
    if (!options_.orbit_pruning) {
      for (std::uint32_t v = 0; v < t.size(); ++v) out.push_back(NodeId{v});
      return out;
    }
    std::vector<std::uint32_t> colors(t.size(), 0);
    for (std::size_t j = 0; j < picks_[s].size(); ++j)
      colors[picks_[s][j].index] = static_cast<std::uint32_t>(j + 1);
    const auto orbit = automorphism_orbits(t, colors);
    std::vector<bool> seen(t.size(), false);
    for (std::uint32_t v = 0; v < t.size(); ++v) {
      if (seen[orbit[v]]) continue;
      seen[orbit[v]] = true;
      out.push_back(NodeId{v});
    }
    return out;
  }

  bool search(std::uint32_t rounds) {
    std::vector<NodeId> reps[2] = {candidates(0), candidates(1)};
    std::vector<Type> types[2];
    for (int s = 0; s < 2; ++s)
      for (NodeId v : reps[s]) types[s].push_back(type_of(s, v));

    for (int a = 0; a < 2; ++a) {
      const int b = 1 - a;
      for (std::size_t i = 0; i < reps[a].size(); ++i) {
        const Type& tu = types[a][i];
        // Re-picking a node only hands Duplicator a free round.
        if (std::find(tu.begin(), tu.end(), 0u) != tu.end()) continue;
        bool answered = false;
        for (std::size_t j = 0; j < reps[b].size() && !answered; ++j) {
          if (types[b][j] != tu) continue;
          picks_[a].push_back(reps[a][i]);
          picks_[b].push_back(reps[b][j]);
          answered = duplicator_wins(rounds - 1);
          picks_[a].pop_back();
          picks_[b].pop_back();
        }
        if (!answered) return false;
      }
    }
    return true;
  }

  const Structure* side_[2];
  GameOptions options_;
  std::vector<NodeId> picks_[2];
  std::map<std::vector<std::uint64_t>, bool> memo_;
};

bool same_shape(const RootedTree& t1, NodeId mark1, const RootedTree& t2, NodeId mark2) {
  ShapeInterner interner;
  std::vector<std::uint32_t> c1(t1.size(), 0), c2(t2.size(), 0);
  c1[mark1.index] = 1;
  c2[mark2.index] = 1;
  return subtree_labels(t1, interner, c1)[t1.root().index] == subtree_labels(t2, interner, c2)[t2.root().index];
}

GameVerdict verdict(bool duplicator) { return duplicator ? GameVerdict::Duplicator : GameVerdict::Spoiler; }

}  // namespace

GameVerdict ehr_standard(const RootedTree& t1, const RootedTree& t2, std::uint32_t k, GameOptions options) {
  if (k == 0) return GameVerdict::Duplicator;
  if (options.orbit_pruning && same_shape(t1, t1.root(), t2, t2.root())) return GameVerdict::Duplicator;
  const Structure left(t1, false), right(t2, false);
  // The root constant behaves like a pair picked before the first round.
  Solver solver(left, right, t1.root(), t2.root(), options);
  return verdict(solver.duplicator_wins(k));
}

GameVerdict ehr_ball(const Ball& b1, const Ball& b2, std::uint32_t k, std::uint32_t max_distance,
                     GameOptions options) {
  if (max_distance == 0) throw std::invalid_argument("distance bound M must be at least 1");
  if (k == 0) return GameVerdict::Duplicator;
  if (options.orbit_pruning && same_shape(b1.tree, b1.center, b2.tree, b2.center)) return GameVerdict::Duplicator;
  const Structure left(b1.tree, true), right(b2.tree, true);
  Solver solver(left, right, b1.center, b2.center, options);
  return verdict(solver.duplicator_wins(k));
}

bool balls_equivalent(const Ball& b1, const Ball& b2, std::uint32_t k, std::uint32_t max_distance) {
  return ehr_ball(b1, b2, k, max_distance) == GameVerdict::Duplicator;
}

}  // namespace gwfo
