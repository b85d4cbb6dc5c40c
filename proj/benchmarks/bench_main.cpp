#include <benchmark/benchmark.h>

#include <vector>

#include <gwfo/calculus.hpp>
#include <gwfo/classes.hpp>
#include <gwfo/games.hpp>
#include <gwfo/sampler.hpp>
#include <gwfo/tree.hpp>

namespace {

using namespace gwfo;

std::vector<RootedTree> sample_batch(double lambda, std::size_t budget, std::size_t count) {
  const auto law = OffspringDistribution::poisson(lambda);
  std::vector<RootedTree> out;
  for (std::uint64_t s = 1; out.size() < count; ++s) out.push_back(sample_tree(law, Seed{s}, budget).tree);
  return out;
}

void BM_SampleTree(benchmark::State& state) {
  const auto law = OffspringDistribution::poisson(1.5);
  std::uint64_t s = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_tree(law, Seed{++s}, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_SampleTree)->Arg(1000)->Arg(100000);

void BM_CanonicalForm(benchmark::State& state) {
  const auto trees = sample_batch(1.5, static_cast<std::size_t>(state.range(0)), 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(canonical_form(trees[i++ % trees.size()]));
}
BENCHMARK(BM_CanonicalForm)->Arg(100)->Arg(10000);

void BM_Classify(benchmark::State& state) {
  const auto trees = sample_batch(1.5, 2000, 64);
  const auto k = static_cast<std::uint32_t>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(classify(trees[i++ % trees.size()], k, 3));
}
BENCHMARK(BM_Classify)->Arg(1)->Arg(2)->Arg(3);

void BM_EhrStandard(benchmark::State& state) {
  const auto trees = sample_batch(1.2, 12, 32);
  const auto k = static_cast<std::uint32_t>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = trees[i % trees.size()];
    const auto& b = trees[(i + 1) % trees.size()];
    ++i;
    benchmark::DoNotOptimize(ehr_standard(a, b, k));
  }
}
BENCHMARK(BM_EhrStandard)->Arg(2)->Arg(3);

void BM_EhrBall(benchmark::State& state) {
  const auto trees = sample_batch(1.5, 200, 32);
  std::vector<Ball> balls;
  for (const auto& t : trees) balls.push_back(ball(t, t.root(), 3));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = balls[i % balls.size()];
    const auto& b = balls[(i + 1) % balls.size()];
    ++i;
    benchmark::DoNotOptimize(ehr_ball(a, b, 2, 18));
  }
}
BENCHMARK(BM_EhrBall);

void BM_ClassProbability(benchmark::State& state) {
  const auto classes = enumerate_classes(static_cast<std::uint32_t>(state.range(0)), 2);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(class_probability(classes[i++ % classes.size()], 1.5));
}
BENCHMARK(BM_ClassProbability)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
