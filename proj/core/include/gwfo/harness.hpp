#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwfo/rng.hpp"
#include "gwfo/sampler.hpp"
#include "gwfo/tree.hpp"

namespace gwfo {

/// One Monte Carlo estimate of a probability.
struct McReport {
  std::string experiment;
  /// What was estimated, e.g. a class's canonical string.
  std::string label;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  /// sqrt(estimate (1 - estimate) / trials).
  double std_error = 0.0;
  std::optional<double> exact;
  /// (estimate - exact) / sqrt(exact (1 - exact) / trials); present iff exact is.
  std::optional<double> z_score;
  Seed seed;
  std::optional<double> wall_time;

  double expected_count() const { return exact ? *exact * static_cast<double>(trials) : 0.0; }
};

/// Binomial summary of `hits` out of `trials`, with a z-score when `exact` is given.
McReport binomial_report(std::string experiment, std::string label, std::uint64_t hits, std::uint64_t trials,
                         std::optional<double> exact, Seed seed);

struct McOptions {
  /// Record elapsed seconds in each report. Off by default so identical runs
  /// produce identical bytes.
  bool timing = false;
  std::size_t budget = kDefaultBudget;
};

/// Samples `trials` Poisson(lambda) trees, classifies T|_depth with cap k and
/// reports the frequency of every class of Gamma_depth against P_sigma(lambda).
std::vector<McReport> mc_class_frequencies(double lambda, std::uint32_t k, std::uint32_t depth, std::uint64_t trials,
                                           Seed seed, McOptions options = {});

/// Same against Pr*[sigma], using trees that reach generation `proxy_depth` as a
/// stand-in for infinite trees. Rows for proxy depth D come first, then rows
/// for D + 10 (same seeds) so the proxy bias is visible.
std::vector<McReport> mc_conditional_frequencies(double lambda, std::uint32_t k, std::uint32_t depth,
                                                 std::uint64_t trials, std::uint32_t proxy_depth, Seed seed,
                                                 McOptions options = {});

struct DecayReport {
  RootedTree pattern = RootedTree::singleton();
  double lambda = 0.0;
  std::vector<std::uint64_t> budgets;
  std::vector<double> bad_rates;
  std::vector<double> std_errors;
  /// Least-squares slope of log(bad rate) against s over positive rates; NaN
  /// when fewer than two rates are positive.
  double fitted_log_slope = 0.0;
  std::uint64_t trials = 0;
  Seed seed;
  std::optional<double> wall_time;
};

/// Node count after which "T contains pattern or T is finite" is settled by
/// the draws seen so far: the termination index, or one past the largest index
/// in the first closed subtree isomorphic to `pattern`. nullopt if neither
/// happens within the draws.
std::optional<std::uint64_t> determination_time(std::span<const std::uint32_t> draws, const RootedTree& pattern);

/// Estimates Pr[bad(s)] = Pr[determination time > s] for each budget s.
DecayReport containment_decay(const RootedTree& pattern, double lambda, std::vector<std::uint64_t> budgets,
                              std::uint64_t trials, Seed seed, McOptions options = {});

/// Least-squares slope of log(y) against x over the points with y > 0.
double fit_log_slope(std::span<const std::uint64_t> x, std::span<const double> y);

}  // namespace gwfo
