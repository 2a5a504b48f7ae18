#include "entrywise/eigensolver.hpp"
#include "entrywise/ensembles.hpp"
#include "entrywise/estimators.hpp"
#include "entrywise/random.hpp"

#include <benchmark/benchmark.h>

#include <memory>

namespace {

using namespace entrywise;

void BM_PhiloxNormal(benchmark::State& state) {
  Rng rng(Seed{7});
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxNormal);

void BM_SampleSbm2(benchmark::State& state) {
  const Sbm2 spec = make_sbm2(static_cast<std::size_t>(state.range(0)), 4.5, 0.25);
  std::uint64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_sbm2(spec, trial_seed(1, 0, t++ % (1u << 20), 1)));
}
BENCHMARK(BM_SampleSbm2)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_SparseLanczosSbm2(benchmark::State& state) {
  const Sbm2 spec = make_sbm2(static_cast<std::size_t>(state.range(0)), 4.5, 0.25);
  const SymmetricMatrix a = sample_sbm2(spec, trial_seed(1, 0, 0, 1));
  for (auto _ : state) benchmark::DoNotOptimize(top_eigenpairs(a, 1, 1));
}
BENCHMARK(BM_SparseLanczosSbm2)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Z2Estimate(benchmark::State& state) {
  const Z2Sync spec = make_z2(static_cast<std::size_t>(state.range(0)), 5.0);
  const SymmetricMatrix y = sample_z2(spec, trial_seed(1, 0, 0, 1));
  for (auto _ : state) benchmark::DoNotOptimize(z2_estimate(y));
}
BENCHMARK(BM_Z2Estimate)->Arg(256)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_NmcEstimate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto signal = std::make_shared<const RectMatrix>(planted_lowrank(n, 5, planted_scale(n), Seed{3}));
  const Nmc spec = make_nmc(signal, std::min(1.0, 10.0 * std::log(double(n)) / double(n)), 1.0, 5);
  const RectMatrix m = sample_nmc(spec, Seed{4});
  for (auto _ : state) benchmark::DoNotOptimize(nmc_estimate(m, 5));
}
BENCHMARK(BM_NmcEstimate)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
