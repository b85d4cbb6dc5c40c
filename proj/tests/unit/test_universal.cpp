#include <gtest/gtest.h>

#include <algorithm>

#include <gwfo/games.hpp>
#include <gwfo/universal.hpp>

using namespace gwfo;

namespace {

// Radius-3^{k+1} ball around the root of `below`, with a long path above it
// so the ball reaches its full height.
Ball deep_ball(const RootedTree& below, std::uint32_t k) {
  const auto r = catalog_radius(k);
  TreeBuilder b;
  NodeId v = b.add_root();
  for (std::uint32_t i = 0; i < r + 2; ++i) v = b.add_child(v);
  std::vector<NodeId> image;
  b.graft(v, below, &image);
  return ball(b.build(), image[below.root().index], r);
}

BallCatalog two_entries(std::uint32_t k) {
  return {k, {deep_ball(RootedTree::singleton(), k), deep_ball(make_star(2), k)}};
}

}  // namespace

TEST(Catalog, Parameters) {
  EXPECT_EQ(pow3(0), 1u);
  EXPECT_EQ(pow3(5), 243u);
  EXPECT_EQ(catalog_radius(1), 9u);
  EXPECT_EQ(catalog_distance_bound(1), 18u);
  EXPECT_THROW(pow3(41), std::overflow_error);
}

TEST(Catalog, Validation) {
  EXPECT_NO_THROW(validate_catalog(two_entries(1)));
  const auto dup = BallCatalog{1, {deep_ball(make_star(2), 1), deep_ball(make_star(2), 1)}};
  EXPECT_THROW(validate_catalog(dup), std::invalid_argument);
  const auto wrong_radius = BallCatalog{1, {ball(make_path(3), NodeId{0}, 2)}};
  EXPECT_THROW(validate_catalog(wrong_radius), std::invalid_argument);
}

TEST(Catalog, FromBallsKeepsOnePerClass) {
  const std::vector<Ball> balls{deep_ball(make_star(2), 1), deep_ball(make_star(3), 1), deep_ball(make_star(2), 1),
                                deep_ball(RootedTree::singleton(), 1)};
  // With k = 1 the two stars are indistinguishable.
  const auto c = catalog_from_balls(1, balls);
  EXPECT_EQ(c.entries.size(), 2u);
  EXPECT_NO_THROW(validate_catalog(c));
}

TEST(Christmas, SingleNodeBallDistance) {
  const BallCatalog catalog{1, {Ball::from_tree(RootedTree::singleton(), NodeId{0}, 9)}};
  const auto x = build_christmas_tree(catalog);
  ASSERT_EQ(x.centers.size(), 1u);
  ASSERT_EQ(x.centers[0].size(), 1u);
  EXPECT_EQ(x.tree.depth(x.centers[0][0]), 252u);
  EXPECT_EQ(x.tree.size(), 253u);
}

TEST(Christmas, CenterDistancesAndBranches) {
  const auto catalog = two_entries(1);
  const auto x = build_christmas_tree(catalog);
  ASSERT_EQ(x.centers.size(), 2u);
  EXPECT_EQ(x.tree.child_count(x.tree.root()), 2u);
  for (const auto& row : x.centers)
    for (NodeId c : row) EXPECT_EQ(x.tree.depth(c), 252u);
  EXPECT_EQ(undirected_distance(x.tree, x.centers[0][0], x.centers[1][0]), 2u * 252u);
}

TEST(Christmas, CopiesPerEntry) {
  const auto catalog = two_entries(2);
  const auto x = build_christmas_tree(catalog);
  EXPECT_EQ(x.tree.child_count(x.tree.root()), 4u);
  for (const auto& row : x.centers) {
    ASSERT_EQ(row.size(), 2u);
    for (NodeId c : row) EXPECT_EQ(x.tree.depth(c), 3u * 3u * 3u * 3u * 3u * 3u + 27u);
    EXPECT_EQ(undirected_distance(x.tree, row[0], row[1]), 2u * (729u + 27u));
  }
}

TEST(Point1, ChristmasTreePasses) {
  for (std::uint32_t k : {1u, 2u}) {
    const auto catalog = two_entries(k);
    const auto x = build_christmas_tree(catalog);
    const auto r = check_point1(x.tree, catalog);
    ASSERT_TRUE(r.ok) << r.diagnosis;
    ASSERT_EQ(r.witnesses.size(), 2u);
    for (std::size_t e = 0; e < 2; ++e) {
      ASSERT_EQ(r.witnesses[e].size(), k);
      for (NodeId c : x.centers[e])
        EXPECT_TRUE(balls_equivalent(ball(x.tree, c, catalog_radius(k)), catalog.entries[e], k,
                                     catalog_distance_bound(k)));
    }
  }
}

TEST(Point1, WitnessesAreTheCentersWhenBallsAreRare) {
  // At k = 2 a string node cannot pass for a star center, so the centers are
  // the only witnesses.
  const auto catalog = two_entries(2);
  const auto x = build_christmas_tree(catalog);
  const auto r = check_point1(x.tree, catalog);
  ASSERT_TRUE(r.ok) << r.diagnosis;
  for (std::size_t e = 0; e < 2; ++e) {
    auto got = r.witnesses[e];
    auto want = x.centers[e];
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want);
  }
}

TEST(Point1, SingleNodeFails) {
  const auto r = check_point1(RootedTree::singleton(), two_entries(1));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.missing_entry, 0u);
}

TEST(Point1, MissingBallNamed) {
  // At k = 1 every deep non-leaf looks like the star entry, so use k = 2.
  const auto catalog = two_entries(2);
  const BallCatalog first_only{2, {catalog.entries[0]}};
  const auto r = check_point1(build_christmas_tree(first_only).tree, catalog);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.missing_entry, 1u);
  EXPECT_FALSE(r.diagnosis.empty());
}

TEST(Point2, CertificateAndSearchAgree) {
  for (std::uint32_t k : {1u, 2u}) {
    const auto catalog = two_entries(k);
    const auto x = build_christmas_tree(catalog);
    const auto cert = check_point2(x, catalog);
    EXPECT_TRUE(cert.ok) << cert.diagnosis;
    EXPECT_TRUE(cert.certificate);
    const auto search = check_point2(x.tree, catalog);
    EXPECT_TRUE(search.ok) << search.diagnosis;
    EXPECT_FALSE(search.certificate);
  }
}

TEST(Point2, TooFewCopiesFail) {
  const auto catalog = two_entries(2);
  const auto x = build_christmas_tree(catalog, 1);
  EXPECT_TRUE(check_point1(x.tree, catalog).ok == false);
  const auto search = check_point2(x.tree, catalog);
  EXPECT_FALSE(search.ok);
  EXPECT_EQ(search.blocking_prefix.size(), 1u);
  ASSERT_TRUE(search.blocked_entry.has_value());
  EXPECT_FALSE(check_point2(x, catalog).ok);
}

TEST(Point2, KOneIsPointOne) {
  const auto catalog = two_entries(1);
  const BallCatalog first_only{1, {catalog.entries[0]}};
  const auto t = build_christmas_tree(first_only).tree;
  EXPECT_EQ(check_point2(t, catalog).ok, check_point1(t, catalog).ok);
  const auto full = build_christmas_tree(catalog).tree;
  EXPECT_EQ(check_point2(full, catalog).ok, check_point1(full, catalog).ok);
}

TEST(SpotCheck, RejectsPairsOutsideHypotheses) {
  const auto catalog = two_entries(1);
  const auto x = build_christmas_tree(catalog);
  const std::vector<std::pair<RootedTree, RootedTree>> pairs{{make_path(3), make_path(4)}};
  const auto r = universality_spot_check(x.tree, 1, pairs);
  EXPECT_EQ(r.accepted, 0u);
  EXPECT_EQ(r.rejected, 1u);
  EXPECT_EQ(r.rejections.size(), 1u);
}

TEST(SpotCheck, DeepCopiesForceEquivalence) {
  const auto catalog = two_entries(1);
  const auto x = build_christmas_tree(catalog);
  auto hang = [&](const RootedTree& top, std::uint32_t path) {
    TreeBuilder b;
    const auto root = b.add_root();
    b.graft(root, top);
    NodeId v = root;
    for (std::uint32_t i = 0; i < path; ++i) v = b.add_child(v);
    b.graft(v, x.tree);
    return b.build();
  };
  const std::vector<std::pair<RootedTree, RootedTree>> pairs{
      {hang(make_star(2), 30), hang(make_star(3), 40)},
      {hang(make_path(3), 28), hang(make_path(3), 35)},
  };
  const auto r = universality_spot_check(x.tree, 1, pairs);
  EXPECT_EQ(r.accepted, 2u) << (r.rejections.empty() ? "" : r.rejections[0]);
  EXPECT_EQ(r.duplicator_wins, 2u);
  EXPECT_TRUE(r.counterexamples.empty());
}
