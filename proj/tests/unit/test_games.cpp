#include <gtest/gtest.h>

#include <map>

#include <gwfo/classes.hpp>
#include <gwfo/games.hpp>

#include "oracles.hpp"

using namespace gwfo;
using gwfo::oracle::all_trees_up_to;
using gwfo::oracle::naive_duplicator_wins;

namespace {

constexpr GameOptions kPlain{false, false};

std::vector<Ball> small_balls(std::size_t max_nodes, std::uint32_t radius) {
  std::vector<Ball> out;
  for (const auto& t : all_trees_up_to(max_nodes))
    for (std::uint32_t v = 0; v < t.size(); ++v) out.push_back(ball(t, NodeId{v}, radius));
  return out;
}

}  // namespace

TEST(Standard, IsomorphicTreesDuplicator) {
  for (const auto& t : all_trees_up_to(6)) {
    const auto shuffled = parse_tree(serialize_tree(t));
    for (std::uint32_t k = 0; k <= 3; ++k) EXPECT_EQ(ehr_standard(t, shuffled, k), GameVerdict::Duplicator);
  }
}

TEST(Standard, LargeStarsIndistinguishable) {
  EXPECT_EQ(ehr_standard(make_star(4), make_star(7), 4), GameVerdict::Duplicator);
  EXPECT_EQ(ehr_standard(make_star(3), make_star(4), 4), GameVerdict::Spoiler);
}

TEST(Standard, PathTwoVersusThree) {
  EXPECT_EQ(ehr_standard(make_path(2), make_path(3), 1), GameVerdict::Spoiler);
  EXPECT_EQ(ehr_standard(make_path(2), make_path(3), 0), GameVerdict::Duplicator);
}

TEST(Standard, MatchesNaiveSearch) {
  const auto trees = all_trees_up_to(5);
  for (const auto& a : trees)
    for (const auto& b : trees)
      for (std::uint32_t k = 1; k <= 3; ++k) {
        const bool naive = naive_duplicator_wins(a, a.root(), b, b.root(), k, false);
        ASSERT_EQ(ehr_standard(a, b, k) == GameVerdict::Duplicator, naive)
            << serialize_tree(a) << " " << serialize_tree(b) << " k=" << k;
        ASSERT_EQ(ehr_standard(a, b, k, kPlain) == GameVerdict::Duplicator, naive);
      }
}

TEST(Standard, OptionsAgreeOnLargerTrees) {
  const auto trees = oracle::sampled_trees(1.2, 12, 40, Seed{21});
  for (std::size_t i = 0; i + 1 < trees.size(); i += 2)
    for (std::uint32_t k = 1; k <= 3; ++k) {
      const auto full = ehr_standard(trees[i], trees[i + 1], k);
      EXPECT_EQ(ehr_standard(trees[i], trees[i + 1], k, {true, false}), full);
      EXPECT_EQ(ehr_standard(trees[i], trees[i + 1], k, {false, true}), full);
    }
}

TEST(Standard, Symmetric) {
  const auto trees = all_trees_up_to(5);
  for (const auto& a : trees)
    for (const auto& b : trees) EXPECT_EQ(ehr_standard(a, b, 2), ehr_standard(b, a, 2));
}

TEST(Ball, IsomorphicBallsDuplicator) {
  for (const auto& b : small_balls(5, 3)) {
    const auto copy = Ball::from_tree(b.tree, b.center, b.radius);
    EXPECT_EQ(ehr_ball(b, copy, 3, 6), GameVerdict::Duplicator);
  }
}

TEST(Ball, CenterDepthMismatchSpoiler) {
  const auto path = make_path(3);
  const auto below = ball(path, NodeId{1}, 2);  // the center has a parent in the ball
  const auto top = ball(path, NodeId{0}, 2);    // the center is the top
  EXPECT_EQ(ehr_ball(below, top, 1, 4), GameVerdict::Spoiler);
  // Deeper mismatches need a second round: one pick at distance d >= 2 cannot
  // tell an ancestor from a descendant.
  const auto five = make_path(5);
  const auto low = ball(five, NodeId{2}, 3);
  const auto high = ball(five, NodeId{1}, 3);
  EXPECT_EQ(ehr_ball(low, high, 1, 4), GameVerdict::Duplicator);
  EXPECT_EQ(ehr_ball(low, high, 2, 4), GameVerdict::Spoiler);
}

TEST(Ball, ZeroDistanceBoundRejected) {
  const auto b = ball(make_path(2), NodeId{0}, 2);
  EXPECT_THROW(ehr_ball(b, b, 1, 0), std::invalid_argument);
}

TEST(Ball, MatchesNaiveSearch) {
  const auto balls = small_balls(5, 2);
  for (std::size_t i = 0; i < balls.size(); i += 3)
    for (std::size_t j = 0; j < balls.size(); j += 2)
      for (std::uint32_t k = 1; k <= 2; ++k) {
        const auto& a = balls[i];
        const auto& b = balls[j];
        const bool naive = naive_duplicator_wins(a.tree, a.center, b.tree, b.center, k, true);
        ASSERT_EQ(ehr_ball(a, b, k, 4) == GameVerdict::Duplicator, naive)
            << serialize_marked_tree(a.tree, a.center) << " " << serialize_marked_tree(b.tree, b.center);
        ASSERT_EQ(ehr_ball(a, b, k, 4, kPlain) == GameVerdict::Duplicator, naive);
      }
}

TEST(Ball, RefinementOfClasses) {
  // Equal Gamma_i classes give equivalent closed i-generation neighbourhoods.
  for (std::uint32_t depth = 1; depth <= 2; ++depth) {
    std::map<std::string, std::vector<RootedTree>> by_class;
    for (const auto& t : all_trees_up_to(7)) by_class[classify(t, 2, depth).canonical()].push_back(t);
    for (const auto& [cls, members] : by_class)
      for (std::size_t i = 1; i < members.size(); ++i) {
        const auto b1 = ball(members[0], members[0].root(), depth + 1);
        const auto b2 = ball(members[i], members[i].root(), depth + 1);
        ASSERT_EQ(ehr_ball(b1, b2, 2, 18), GameVerdict::Duplicator) << cls;
      }
  }
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(GameVerdict::Duplicator), "duplicator");
  EXPECT_EQ(to_string(GameVerdict::Spoiler), "spoiler");
}
