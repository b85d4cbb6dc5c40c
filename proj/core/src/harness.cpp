#include "gwfo/harness.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "gwfo/calculus.hpp"
#include "gwfo/classes.hpp"
#include "gwfo/iso.hpp"

namespace gwfo {

McReport binomial_report(std::string experiment, std::string label, std::uint64_t hits, std::uint64_t trials,
                         std::optional<double> exact, Seed seed) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  McReport r;
  r.experiment = std::move(experiment);
  r.label = std::move(label);
  r.trials = trials;
  r.hits = hits;
  const double n = static_cast<double>(trials);
  r.estimate = static_cast<double>(hits) / n;
  r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
  r.exact = exact;
  r.seed = seed;
  if (exact) {
    // Standard error under the hypothesis, so rare classes seen zero times still get a finite z.
    const double se = std::sqrt(*exact * (1.0 - *exact) / n);
    if (se > 0.0)
      r.z_score = (r.estimate - *exact) / se;
    else
      r.z_score = r.estimate == *exact ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<McReport> tabulate(const std::string& experiment, const std::vector<GammaClass>& classes,
                               const std::map<std::string, std::uint64_t>& counts, std::uint64_t trials,
                               const std::function<double(const GammaClass&)>& exact, Seed seed,
                               const nlohmann::ordered_json& params) {
  std::vector<McReport> out;
  for (const auto& c : classes) {
    const auto it = counts.find(c.canonical());
    const std::uint64_t hits = it == counts.end() ? 0 : it->second;
    auto r = binomial_report(experiment, c.canonical(), hits, trials, exact(c), seed);
    r.parameters = params;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<McReport> mc_class_frequencies(double lambda, std::uint32_t k, std::uint32_t depth, std::uint64_t trials,
                                           Seed seed, McOptions options) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  const auto start = Clock::now();
  const auto law = OffspringDistribution::poisson(lambda);
  const auto classes = enumerate_classes(k, depth);
  std::map<std::string, std::uint64_t> counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto sample = sample_generations(law, derive_trial_seed(seed, t), depth, options.budget);
    if (sample.status == SampleStatus::Truncated)
      throw std::runtime_error("node budget exhausted before the classified generations were complete");
    ++counts[classify(sample.tree, k, depth).canonical()];
  }
  nlohmann::ordered_json params{{"lambda", lambda}, {"k", k}, {"depth", depth}};
  auto rows = tabulate("class_frequencies", classes, counts, trials,
                       [&](const GammaClass& c) { return class_probability(c, lambda); }, seed, params);
  if (options.timing)
    for (auto& r : rows) r.wall_time = seconds_since(start);
  return rows;
}

std::vector<McReport> mc_conditional_frequencies(double lambda, std::uint32_t k, std::uint32_t depth,
                                                 std::uint64_t trials, std::uint32_t proxy_depth, Seed seed,
                                                 McOptions options) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (!(lambda > 1.0)) throw std::domain_error("conditioning on survival needs lambda > 1");
  if (proxy_depth < depth) throw std::invalid_argument("proxy depth must be at least the classified depth");
  const auto start = Clock::now();
  const auto law = OffspringDistribution::poisson(lambda);
  const auto classes = enumerate_classes(k, depth);
  std::vector<McReport> out;
  for (const std::uint32_t d : {proxy_depth, proxy_depth + 10}) {
    std::map<std::string, std::uint64_t> counts;
    SurvivalOptions survival;
    survival.complete_generations = depth;
    survival.budget = options.budget;
    for (std::uint64_t t = 0; t < trials; ++t) {
      const auto sample = sample_surviving(law, derive_trial_seed(seed, t), d, survival);
      if (!sample) throw std::runtime_error("no surviving sample within the retry cap");
      ++counts[classify(sample->tree, k, depth).canonical()];
    }
    nlohmann::ordered_json params{{"lambda", lambda}, {"k", k}, {"depth", depth}, {"proxy_depth", d}};
    auto rows = tabulate("conditional_frequencies", classes, counts, trials,
                         [&](const GammaClass& c) { return infinite_conditioned_probability(c, lambda); }, seed,
                         params);
    for (auto& r : rows) {
      if (options.timing) r.wall_time = seconds_since(start);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::optional<std::uint64_t> determination_time(std::span<const std::uint32_t> draws, const RootedTree& pattern) {
  // Every node created so far; the first `explored` of them have their draws.
  std::vector<std::optional<NodeId>> parents{std::nullopt};
  std::size_t explored = 0;
  std::optional<std::uint64_t> terminated;
  for (; explored < draws.size() && explored < parents.size(); ++explored) {
    for (std::uint32_t c = 0; c < draws[explored]; ++c)
      parents.push_back(NodeId{static_cast<std::uint32_t>(explored)});
    if (parents.size() == explored + 1) {
      terminated = explored + 1;
      ++explored;
      break;
    }
  }
  const auto tree = RootedTree::from_parents(parents);

  // Largest node index in each subtree; node ids are BFS positions here.
  std::vector<std::uint32_t> max_index(tree.size());
  for (std::uint32_t v = static_cast<std::uint32_t>(tree.size()); v-- > 0;) {
    max_index[v] = std::max(max_index[v], v);
    if (const auto p = tree.parent(NodeId{v})) max_index[p->index] = std::max(max_index[p->index], max_index[v]);
  }
  ShapeInterner interner;
  const auto target = subtree_labels(pattern, interner)[pattern.root().index];
  const auto labels = subtree_labels(tree, interner);
  std::optional<std::uint64_t> best = terminated;
  for (std::uint32_t v = 0; v < tree.size(); ++v) {
    if (max_index[v] >= explored || labels[v] != target) continue;
    const std::uint64_t closes = std::uint64_t{max_index[v]} + 1;
    if (!best || closes < *best) best = closes;
  }
  return best;
}

double fit_log_slope(std::span<const std::uint64_t> x, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double xi = static_cast<double>(x[i]);
    const double yi = std::log(y[i]);
    sx += xi, sy += yi, sxx += xi * xi, sxy += xi * yi;
    ++n;
  }
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (n < 2 || denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

DecayReport containment_decay(const RootedTree& pattern, double lambda, std::vector<std::uint64_t> budgets,
                              std::uint64_t trials, Seed seed, McOptions options) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  if (budgets.empty()) throw std::invalid_argument("at least one budget is needed");
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    if (budgets[i] < pattern.size()) throw std::invalid_argument("budgets must be at least the pattern size");
    if (i && budgets[i] <= budgets[i - 1]) throw std::invalid_argument("budgets must be strictly increasing");
  }
  const auto start = Clock::now();
  const auto law = OffspringDistribution::poisson(lambda);
  std::vector<std::uint64_t> bad(budgets.size(), 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto sample = sample_tree(law, derive_trial_seed(seed, t), budgets.back());
    const auto when = determination_time(sample.trace.draws, pattern);
    for (std::size_t i = 0; i < budgets.size(); ++i)
      if (!when || *when > budgets[i]) ++bad[i];
  }
  DecayReport report;
  report.pattern = pattern;
  report.lambda = lambda;
  report.budgets = budgets;
  report.trials = trials;
  report.seed = seed;
  for (auto b : bad) {
    const double rate = static_cast<double>(b) / static_cast<double>(trials);
    report.bad_rates.push_back(rate);
    report.std_errors.push_back(std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials)));
  }
  report.fitted_log_slope = fit_log_slope(report.budgets, report.bad_rates);
  if (options.timing) report.wall_time = seconds_since(start);
  return report;
}

}  // namespace gwfo
