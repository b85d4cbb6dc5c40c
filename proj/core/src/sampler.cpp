#include "gwfo/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gwfo {

OffspringDistribution OffspringDistribution::poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("Poisson mean must be a positive real");
  if (lambda > kMaxPoissonMean)
    throw std::invalid_argument(fmt::format("Poisson mean {} exceeds the supported {}", lambda, kMaxPoissonMean));
  Poisson p{lambda, {}, std::exp(-lambda)};
  double cdf = p.last_term;
  p.cdf.push_back(cdf);
  for (std::uint32_t k = 1; cdf < 1.0 - 1e-16 && k < 200; ++k) {
    p.last_term *= lambda / k;
    cdf += p.last_term;
    p.cdf.push_back(cdf);
  }
  return OffspringDistribution(std::move(p));
}

OffspringDistribution OffspringDistribution::finite_support(std::vector<double> probabilities) {
  if (probabilities.empty()) throw std::invalid_argument("finite-support law needs at least one value");
  double sum = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("probabilities must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument(fmt::format("probabilities sum to {:.17g}, not 1", sum));
  FiniteSupport fs{std::move(probabilities), {}};
  fs.cdf.resize(fs.probabilities.size());
  std::partial_sum(fs.probabilities.begin(), fs.probabilities.end(), fs.cdf.begin());
  return OffspringDistribution(std::move(fs));
}

double OffspringDistribution::lambda() const { return std::get<Poisson>(kind_).lambda; }

std::span<const double> OffspringDistribution::probabilities() const {
  return std::get<FiniteSupport>(kind_).probabilities;
}

double OffspringDistribution::mean() const {
  if (const auto* p = std::get_if<Poisson>(&kind_)) return p->lambda;
  const auto& probs = std::get<FiniteSupport>(kind_).probabilities;
  double m = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) m += static_cast<double>(i) * probs[i];
  return m;
}

double OffspringDistribution::variance() const {
  if (const auto* p = std::get_if<Poisson>(&kind_)) return p->lambda;
  const auto& probs = std::get<FiniteSupport>(kind_).probabilities;
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) v += (static_cast<double>(i) - m) * (static_cast<double>(i) - m) * probs[i];
  return v;
}

double OffspringDistribution::log_mgf(double alpha) const {
  if (const auto* p = std::get_if<Poisson>(&kind_)) return p->lambda * std::expm1(alpha);
  const auto& probs = std::get<FiniteSupport>(kind_).probabilities;
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (probs[i] > 0.0) peak = std::max(peak, std::log(probs[i]) + alpha * static_cast<double>(i));
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (probs[i] > 0.0) acc += std::exp(std::log(probs[i]) + alpha * static_cast<double>(i) - peak);
  return peak + std::log(acc);
}

std::uint32_t OffspringDistribution::sample(Rng& rng) const {
  const double u = rng.uniform();
  if (const auto* p = std::get_if<Poisson>(&kind_)) {
    // Sequential inversion over the table, continued term by term past its end;
    // the cap only matters when rounding leaves cdf < u near 1.
    constexpr std::uint32_t kCap = 1000;
    const auto& table = p->cdf;
    std::uint32_t k = 0;
    while (k < table.size() && u >= table[k]) ++k;
    if (k < table.size()) return k;
    k = static_cast<std::uint32_t>(table.size() - 1);
    double term = p->last_term;
    double cdf = table.back();
    while (u >= cdf && k < kCap) {
      ++k;
      term *= p->lambda / k;
      cdf += term;
      if (term == 0.0) break;
    }
    return k;
  }
  const auto& cdf = std::get<FiniteSupport>(kind_).cdf;
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) {
    // u beyond the rounded total mass: take the last value with positive probability.
    const auto& probs = std::get<FiniteSupport>(kind_).probabilities;
    std::size_t last = probs.size() - 1;
    while (last > 0 && probs[last] == 0.0) --last;
    return static_cast<std::uint32_t>(last);
  }
  return static_cast<std::uint32_t>(it - cdf.begin());
}

std::optional<std::uint64_t> termination_index(std::span<const std::uint32_t> draws) {
  std::uint64_t sum = 0;
  for (std::size_t n = 1; n <= draws.size(); ++n) {
    sum += draws[n - 1];
    if (sum == n - 1) return n;
  }
  return std::nullopt;
}

TreeSample tree_from_draws(std::span<const std::uint32_t> draws) {
  TreeSample out;
  std::vector<std::optional<NodeId>> parents{std::nullopt};
  std::size_t processed = 0;
  for (; processed < draws.size(); ++processed) {
    const auto x = draws[processed];
    for (std::uint32_t c = 0; c < x; ++c) parents.push_back(NodeId{static_cast<std::uint32_t>(processed)});
    if (parents.size() == processed + 1) {
      ++processed;
      out.trace.terminated_at = processed;
      break;
    }
  }
  out.trace.draws.assign(draws.begin(), draws.begin() + static_cast<std::ptrdiff_t>(processed));
  if (out.trace.terminated_at) {
    out.status = SampleStatus::Complete;
  } else {
    out.status = SampleStatus::Truncated;
    parents.resize(std::max<std::size_t>(processed, 1));
  }
  out.tree = RootedTree::from_parents(parents);
  return out;
}

TreeSample sample_tree(const OffspringDistribution& law, Seed seed, std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("budget must be at least 1");
  Rng rng(seed);
  std::vector<std::uint32_t> draws;
  std::uint64_t created = 1;
  while (draws.size() < budget) {
    const auto x = law.sample(rng);
    draws.push_back(x);
    created += x;
    if (created == draws.size()) break;
  }
  return tree_from_draws(draws);
}

ForestSample forest_from_draws(std::span<const std::uint32_t> draws) {
  ForestSample out;
  out.trace.draws.assign(draws.begin(), draws.end());
  out.trace.terminated_at = termination_index(draws);
  out.first_child.assign(draws.size(), 0);

  // Forest indices are 1-based; parent_of[j] == 0 marks a root.
  std::vector<std::uint64_t> parent_of(2, 0);
  std::uint64_t next = 1;
  std::uint64_t start = 1;
  auto build = [&](std::uint64_t first, std::uint64_t last) {
    std::vector<std::optional<NodeId>> parents;
    for (std::uint64_t j = first; j <= last; ++j) {
      if (j == first) {
        parents.push_back(std::nullopt);
      } else {
        parents.push_back(NodeId{static_cast<std::uint32_t>(parent_of[j] - first)});
      }
    }
    out.trees.push_back(RootedTree::from_parents(parents));
  };
  for (std::uint64_t j = 1; j <= draws.size(); ++j) {
    if (j == next) {
      start = j;
      next = j + 1;
    }
    const auto x = draws[j - 1];
    out.first_child[j - 1] = next;
    if (parent_of.size() < next + x + 1) parent_of.resize(next + x + 1, 0);
    for (std::uint32_t c = 0; c < x; ++c) parent_of[next + c] = j;
    next += x;
    if (next == j + 1) build(start, j);
  }
  const std::uint64_t s = draws.size();
  if (s > 0 && next > s + 1) {
    out.last_tree_open = true;
    build(start, s);
  }
  return out;
}

ForestSample sample_forest(const OffspringDistribution& law, Seed seed, std::size_t total_nodes) {
  if (total_nodes == 0) throw std::invalid_argument("forest needs at least one node");
  Rng rng(seed);
  std::vector<std::uint32_t> draws(total_nodes);
  for (auto& x : draws) x = law.sample(rng);
  return forest_from_draws(draws);
}

std::uint64_t highest_child_index(const ForestSample& forest, std::uint64_t x) {
  const auto& draws = forest.trace.draws;
  if (x > draws.size()) throw std::out_of_range("g_1 needs the draws of nodes 1..x");
  std::uint64_t best = x;
  for (std::uint64_t j = 1; j <= x; ++j)
    if (draws[j - 1] > 0) best = std::max(best, forest.first_child[j - 1] + draws[j - 1] - 1);
  return best;
}

GenerationSample sample_generations(const OffspringDistribution& law, Seed seed,
                                    std::uint32_t generations, std::size_t budget) {
  Rng rng(seed);
  std::vector<std::optional<NodeId>> parents{std::nullopt};
  std::vector<std::uint32_t> depth{0};
  GenerationSample out;
  for (std::size_t head = 0; head < parents.size() && depth[head] < generations; ++head) {
    if (out.draws_used == budget) {
      out.status = SampleStatus::Truncated;
      break;
    }
    const auto x = law.sample(rng);
    ++out.draws_used;
    for (std::uint32_t c = 0; c < x; ++c) {
      parents.push_back(NodeId{static_cast<std::uint32_t>(head)});
      depth.push_back(depth[head] + 1);
    }
  }
  out.tree = RootedTree::from_parents(parents);
  return out;
}

std::optional<SurvivingSample> sample_surviving(const OffspringDistribution& law, Seed seed,
                                                std::uint32_t depth, SurvivalOptions options) {
  if (depth == 0) throw std::invalid_argument("survival depth must be at least 1");
  Rng rng(seed);
  const std::uint32_t full = std::min(options.complete_generations, depth);
  std::uint64_t total_draws = 0;

  for (std::size_t attempt = 1; attempt <= options.max_attempts; ++attempt) {
    std::vector<std::optional<NodeId>> parents{std::nullopt};
    std::vector<std::uint32_t> level{0};
    bool over_budget = false;
    auto explore = [&](std::size_t v) {
      const auto x = law.sample(rng);
      ++total_draws;
      for (std::uint32_t c = 0; c < x; ++c) {
        parents.push_back(NodeId{static_cast<std::uint32_t>(v)});
        level.push_back(level[v] + 1);
      }
      if (parents.size() > options.budget) over_budget = true;
      return x;
    };

    std::size_t head = 0;
    for (; head < parents.size() && level[head] < full && !over_budget; ++head) explore(head);
    if (over_budget) continue;

    bool survived = std::any_of(level.begin(), level.end(), [&](auto d) { return d >= depth; });
    // Depth-first witness search below each frontier node, stopping at the first success.
    const std::size_t frontier_end = parents.size();
    for (std::size_t f = head; f < frontier_end && !survived && !over_budget; ++f) {
      std::vector<std::size_t> stack{f};
      while (!stack.empty() && !survived && !over_budget) {
        const auto v = stack.back();
        stack.pop_back();
        const std::size_t first = parents.size();
        const auto x = explore(v);
        if (x > 0 && level[v] + 1 >= depth) survived = true;
        for (std::size_t c = first + x; c > first; --c) stack.push_back(c - 1);
      }
    }
    if (!survived || over_budget) continue;

    SurvivingSample out;
    out.tree = RootedTree::from_parents(parents);
    out.complete_generations = full;
    out.reached_depth = depth;
    out.attempts = attempt;
    out.draws_used = total_draws;
    return out;
  }
  return std::nullopt;
}

ChernoffCheck chernoff_feasible(const OffspringDistribution& law, double alpha, double epsilon) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const double log_value = epsilon * law.log_mgf(alpha) - alpha * (1.0 - epsilon);
  return {std::exp(log_value), log_value < 0.0};
}

}  // namespace gwfo
