#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include <gwfo/sampler.hpp>

using namespace gwfo;

namespace {

constexpr double kQ2 = 1.0 - 0.79681213002002004616;  // mpmath root of 1 - p = exp(-2p)

}  // namespace

TEST(Rng, TrialSeedsAreDistinctAndStable) {
  EXPECT_EQ(derive_trial_seed(Seed{1}, 5), derive_trial_seed(Seed{1}, 5));
  EXPECT_NE(derive_trial_seed(Seed{1}, 5), derive_trial_seed(Seed{1}, 6));
  EXPECT_EQ(derive_trial_seed(Seed{7}, 3).master, splitmix64(7 ^ 3));
}

TEST(Rng, SplitmixReferenceValue) {
  // First output of the published splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFull);
}

TEST(Rng, UniformInUnitInterval) {
  Rng rng(Seed{42});
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Offspring, RejectsBadLaws) {
  EXPECT_THROW(OffspringDistribution::poisson(-1.0), std::invalid_argument);
  EXPECT_THROW(OffspringDistribution::poisson(31.0), std::invalid_argument);
  EXPECT_THROW(OffspringDistribution::finite_support({}), std::invalid_argument);
  EXPECT_THROW(OffspringDistribution::finite_support({0.5, 0.4}), std::invalid_argument);
  EXPECT_THROW(OffspringDistribution::finite_support({1.5, -0.5}), std::invalid_argument);
}

TEST(Offspring, PoissonMomentsEmpirically) {
  const auto law = OffspringDistribution::poisson(2.0);
  Rng rng(Seed{3});
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = law.sample(rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 2.0, 4 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sq / n - mean * mean, 2.0, 0.05);
}

TEST(Offspring, FiniteSupportFrequencies) {
  const auto law = OffspringDistribution::finite_support({0.25, 0.5, 0.25});
  EXPECT_DOUBLE_EQ(law.mean(), 1.0);
  EXPECT_DOUBLE_EQ(law.variance(), 0.5);
  Rng rng(Seed{9});
  std::array<int, 3> count{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++count.at(law.sample(rng));
  EXPECT_NEAR(count[1] / double(n), 0.5, 4 * std::sqrt(0.25 / n));
}

TEST(Termination, IndexScan) {
  const std::vector<std::uint32_t> zero{0};
  EXPECT_EQ(termination_index(zero), 1u);
  const std::vector<std::uint32_t> two{2, 0, 0, 5};
  EXPECT_EQ(termination_index(two), 3u);
  const std::vector<std::uint32_t> open{1, 1, 1};
  EXPECT_FALSE(termination_index(open).has_value());
}

TEST(SampleTree, FirstDrawZeroGivesSingleNode) {
  const std::vector<std::uint32_t> draws{0, 3, 3};
  const auto s = tree_from_draws(draws);
  EXPECT_EQ(s.tree.size(), 1u);
  EXPECT_EQ(s.status, SampleStatus::Complete);
  EXPECT_EQ(s.trace.terminated_at, 1u);
}

TEST(SampleTree, DegenerateLawIsSingleNode) {
  const auto law = OffspringDistribution::finite_support({1.0});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_tree(law, Seed{seed}, 10);
    EXPECT_EQ(s.tree.size(), 1u);
    EXPECT_EQ(s.status, SampleStatus::Complete);
  }
}

TEST(SampleTree, ReproducibleAndReplayable) {
  const auto law = OffspringDistribution::poisson(1.3);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto a = sample_tree(law, Seed{seed}, 500);
    const auto b = sample_tree(law, Seed{seed}, 500);
    ASSERT_EQ(serialize_tree_ordered(a.tree), serialize_tree_ordered(b.tree));
    const auto replay = tree_from_draws(a.trace.draws);
    ASSERT_EQ(serialize_tree_ordered(replay.tree), serialize_tree_ordered(a.tree));
    ASSERT_EQ(replay.status, a.status);
    ASSERT_EQ(a.trace.terminated_at, termination_index(a.trace.draws));
    if (a.status == SampleStatus::Complete) {
      ASSERT_EQ(a.tree.size(), a.trace.draws.size());
      const auto total = std::accumulate(a.trace.draws.begin(), a.trace.draws.end(), std::uint64_t{0});
      ASSERT_EQ(total + 1, a.tree.size());
    } else {
      ASSERT_EQ(a.trace.draws.size(), 500u);
    }
  }
}

TEST(SampleTree, CompleteFractionNearExtinctionProbability) {
  const auto law = OffspringDistribution::poisson(2.0);
  const std::uint64_t n = 100000;
  std::uint64_t complete = 0;
  for (std::uint64_t t = 0; t < n; ++t)
    complete += sample_tree(law, derive_trial_seed(kDefaultSeed, t), 10000).status == SampleStatus::Complete;
  const double sigma = std::sqrt(kQ2 * (1 - kQ2) / n);
  EXPECT_NEAR(complete / double(n), kQ2, 3 * sigma);
}

TEST(Forest, AllZeroDrawsGiveSingletons) {
  const std::vector<std::uint32_t> draws(7, 0);
  const auto f = forest_from_draws(draws);
  ASSERT_EQ(f.trees.size(), 7u);
  for (const auto& t : f.trees) EXPECT_EQ(t.size(), 1u);
  EXPECT_FALSE(f.last_tree_open);
}

TEST(Forest, RestartsAfterTermination) {
  const std::vector<std::uint32_t> draws{2, 0, 0, 1, 0, 3};
  const auto f = forest_from_draws(draws);
  ASSERT_EQ(f.trees.size(), 3u);
  EXPECT_EQ(f.trees[0].size(), 3u);
  EXPECT_EQ(f.trees[1].size(), 2u);
  EXPECT_TRUE(f.last_tree_open);
  EXPECT_EQ(f.first_child[0], 2u);
  EXPECT_EQ(f.first_child[3], 5u);
}

TEST(Forest, HighestChildIndexBound) {
  const auto law = OffspringDistribution::poisson(2.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = sample_forest(law, derive_trial_seed(Seed{11}, seed), 400);
    std::uint64_t prefix = 0;
    for (std::uint64_t x = 1; x <= 400; ++x) {
      prefix += f.trace.draws[x - 1];
      const auto g = highest_child_index(f, x);
      ASSERT_GE(g, x);
      ASSERT_LE(g, x + prefix);
    }
  }
}

TEST(Generations, PrefixOfFullSample) {
  const auto law = OffspringDistribution::poisson(1.5);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto full = sample_tree(law, Seed{seed}, 100000);
    if (full.status != SampleStatus::Complete) continue;
    for (std::uint32_t g = 0; g <= 4; ++g) {
      const auto part = sample_generations(law, Seed{seed}, g);
      ASSERT_EQ(canonical_form(part.tree), canonical_form(truncate(full.tree, g)));
    }
  }
}

TEST(Surviving, ReachesDepthWithExactPrefix) {
  const auto law = OffspringDistribution::poisson(2.0);
  SurvivalOptions options;
  options.complete_generations = 3;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = sample_surviving(law, Seed{seed}, 20, options);
    ASSERT_TRUE(s.has_value());
    EXPECT_GE(s->reached_depth, 20u);
    EXPECT_GE(s->tree.height(), 20u);
    EXPECT_EQ(s->complete_generations, 3u);
  }
}

TEST(Surviving, SubcriticalGivesUp) {
  SurvivalOptions options;
  options.max_attempts = 200;
  EXPECT_FALSE(sample_surviving(OffspringDistribution::poisson(0.5), Seed{1}, 60, options).has_value());
}

TEST(Chernoff, DegenerateLaw) {
  const auto c = chernoff_feasible(OffspringDistribution::finite_support({1.0}), 1.3, 0.5);
  EXPECT_NEAR(c.value, std::exp(-0.65), 1e-15);
  EXPECT_TRUE(c.feasible);
}

TEST(Chernoff, PoissonInsideWindow) {
  const double alpha = std::log(4.5) / 2;
  const auto c = chernoff_feasible(OffspringDistribution::poisson(2.0), alpha, 0.1);
  EXPECT_LT(c.value, 1.0);
  EXPECT_TRUE(c.feasible);
}

TEST(Chernoff, EpsilonTooLargeNeverFeasible) {
  const auto law = OffspringDistribution::poisson(2.0);
  for (int i = 1; i <= 1000; ++i) {
    const auto c = chernoff_feasible(law, i / 100.0, 0.9);
    EXPECT_GE(c.value, 1.0);
    EXPECT_FALSE(c.feasible);
  }
}
