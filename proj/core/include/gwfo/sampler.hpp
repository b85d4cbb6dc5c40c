#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gwfo/rng.hpp"
#include "gwfo/tree.hpp"

namespace gwfo {

/// Offspring law of a Galton-Watson tree: Poisson(lambda) or an explicit
/// finite-support vector where probabilities[i] = Pr[i children].
class OffspringDistribution {
 public:
  /// Largest mean accepted by the sequential-inversion Poisson sampler.
  static constexpr double kMaxPoissonMean = 30.0;

  static OffspringDistribution poisson(double lambda);
  static OffspringDistribution finite_support(std::vector<double> probabilities);

  bool is_poisson() const noexcept { return std::holds_alternative<Poisson>(kind_); }
  /// Poisson mean; throws for finite-support laws.
  double lambda() const;
  /// Finite-support probabilities; throws for Poisson laws.
  std::span<const double> probabilities() const;

  double mean() const;
  double variance() const;
  /// log E[exp(alpha X)].
  double log_mgf(double alpha) const;

  std::uint32_t sample(Rng& rng) const;

 private:
  struct Poisson {
    double lambda;
    /// cdf[i] = Pr[X <= i], accumulated exactly as the sequential inversion does.
    std::vector<double> cdf;
    double last_term = 0.0;
  };
  struct FiniteSupport {
    std::vector<double> probabilities;
    std::vector<double> cdf;
  };
  explicit OffspringDistribution(std::variant<Poisson, FiniteSupport> kind) : kind_(std::move(kind)) {}

  std::variant<Poisson, FiniteSupport> kind_;
};

/// Realized offspring draws X_1, X_2, ... in BFS order.
struct GrowthTrace {
  std::vector<std::uint32_t> draws;
  /// First n with X_1 + ... + X_n = n - 1, if it occurred among the draws.
  std::optional<std::uint64_t> terminated_at;
};

/// Scan oracle for the termination index of a draw prefix.
std::optional<std::uint64_t> termination_index(std::span<const std::uint32_t> draws);

enum class SampleStatus { Complete, Truncated };

struct TreeSample {
  RootedTree tree = RootedTree::singleton();
  GrowthTrace trace;
  SampleStatus status = SampleStatus::Complete;
};

/// Default node budget for tree growth.
inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// Grows one tree by the fictitious continuation: node i (BFS order, the root is
/// node 1) receives X_i children. At most `budget` draws are made. A Truncated
/// sample holds the explored nodes 1..budget and their draws.
TreeSample sample_tree(const OffspringDistribution& law, Seed seed, std::size_t budget = kDefaultBudget);

/// Same construction from an explicit draw sequence; Truncated if the draws
/// run out before termination.
TreeSample tree_from_draws(std::span<const std::uint32_t> draws);

/// Forest process over exactly `total_nodes` draws.
struct ForestSample {
  /// Completed trees in order, followed by the explored part of the last tree
  /// when it is still open.
  std::vector<RootedTree> trees;
  GrowthTrace trace;
  /// 1-based forest index of the first child of node j (entry j-1); meaningless
  /// when draws[j-1] == 0.
  std::vector<std::uint64_t> first_child;
  bool last_tree_open = false;
};

ForestSample sample_forest(const OffspringDistribution& law, Seed seed, std::size_t total_nodes);
ForestSample forest_from_draws(std::span<const std::uint32_t> draws);

/// g_1(x): highest forest index among nodes 1..floor(x) and their children.
std::uint64_t highest_child_index(const ForestSample& forest, std::uint64_t x);

/// The first `generations` generations, exact: every node of depth < generations
/// is explored in BFS order, so the draws coincide with a prefix of sample_tree's.
struct GenerationSample {
  RootedTree tree = RootedTree::singleton();
  std::uint64_t draws_used = 0;
  SampleStatus status = SampleStatus::Complete;
};

GenerationSample sample_generations(const OffspringDistribution& law, Seed seed,
                                    std::uint32_t generations, std::size_t budget = kDefaultBudget);

struct SurvivalOptions {
  /// Generations explored exhaustively (T|_g is exact in the result).
  std::uint32_t complete_generations = 0;
  /// Node budget per attempt; an attempt that exceeds it is discarded.
  std::size_t budget = kDefaultBudget;
  std::size_t max_attempts = 10'000;
};

/// Result of the survival proxy: a tree that has a node at generation `depth`.
/// Beyond `complete_generations`, only a depth-first survival witness is kept.
struct SurvivingSample {
  RootedTree tree = RootedTree::singleton();
  std::uint32_t complete_generations = 0;
  std::uint32_t reached_depth = 0;
  std::size_t attempts = 0;
  std::uint64_t draws_used = 0;
};

/// Rejection sampler for "reaches generation `depth`". Returns nullopt when
/// max_attempts are used up (the expected outcome for lambda <= 1 and large depth).
std::optional<SurvivingSample> sample_surviving(const OffspringDistribution& law, Seed seed,
                                                std::uint32_t depth, SurvivalOptions options = {});

struct ChernoffCheck {
  /// phi(alpha)^epsilon * exp(-alpha (1 - epsilon)); +inf on overflow.
  double value = 0.0;
  bool feasible = false;
};

ChernoffCheck chernoff_feasible(const OffspringDistribution& law, double alpha, double epsilon);

}  // namespace gwfo
