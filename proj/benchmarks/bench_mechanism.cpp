#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <schedmech/distributions.hpp>
#include <schedmech/mechanism.hpp>
#include <schedmech/rng.hpp>

namespace {

using namespace schedmech;

std::vector<double> random_costs(int n, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::vector<double> costs(static_cast<std::size_t>(n));
  for (double& c : costs) {
    c = std::exp(std::log(1e3) * uniform01(rng));
  }
  return costs;
}

void BM_Allocate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CostVector costs(random_costs(n, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(allocate(costs));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Allocate)->Arg(2)->Arg(8)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void BM_AllocateOracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CostVector costs(random_costs(n, 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(allocate_oracle(costs));
  }
}
BENCHMARK(BM_AllocateOracle)->Arg(2)->Arg(8)->Arg(16)->Arg(32);

void BM_SocialCost(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CostVector costs(random_costs(n, 11));
  for (auto _ : state) {
    benchmark::DoNotOptimize(social_cost(costs));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SocialCost)->Arg(2)->Arg(8)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void BM_Sample(benchmark::State& state) {
  DistributionSpec spec;
  spec.family = static_cast<Family>(state.range(0));
  spec.shape = 1.0;
  spec.t_min = 1.0;
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(spec, rng));
  }
}
BENCHMARK(BM_Sample)->Arg(0)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
