#include <benchmark/benchmark.h>

#include <random>

#include "dtcv/contracts.hpp"
#include "dtcv/plant.hpp"
#include "dtcv/stabilize.hpp"
#include "dtcv/twin.hpp"
#include "dtcv/zone.hpp"

namespace {

using namespace dtcv;

void BM_ZoneCanonicalize(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> c(0, 50);
  Zone base = Zone::universe(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (i != j) base.set(i, j, Bound::le(c(rng)));
  for (auto _ : state) {
    Zone z = base;
    z.canonicalize();
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_ZoneCanonicalize)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_PlantRun(benchmark::State& state) {
  const PlantParams p = random_scenario(7);
  for (auto _ : state) benchmark::DoNotOptimize(run(p, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PlantRun)->Arg(1000)->Arg(10000);

void BM_Stabilize(benchmark::State& state) {
  std::vector<std::int64_t> xs(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(3);
  for (auto& x : xs) x = static_cast<std::int64_t>(rng() % 20000);
  for (auto _ : state) benchmark::DoNotOptimize(stabilize(xs, 5));
}
BENCHMARK(BM_Stabilize)->Arg(10000);

void BM_VerifyContract(benchmark::State& state, ContractId id) {
  const PlantParams p = random_scenario(7);
  const Trace tr = rollout(*perfect_twin(), p, state.range(0));
  const ContractParams cp = params_for(p);
  for (auto _ : state) {
    const Contract c = build_contract(id, tr, cp);
    benchmark::DoNotOptimize(verify_contract(c, tr, {}, false));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_VerifyContract, MC1, ContractId::MC1)->Arg(300)->Arg(1200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_VerifyContract, FC2, ContractId::FC2)->Arg(300)->Arg(1200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_VerifyContract, IC1, ContractId::IC1)->Arg(300)->Arg(1200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
