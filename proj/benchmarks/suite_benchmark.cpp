// Parallel vs serial suite evaluation, plus the per-item engine and oracle.

#include <benchmark/benchmark.h>

#include "okd/bench.hpp"
#include "okd/engine.hpp"
#include "okd/instances.hpp"
#include "okd/io.hpp"
#include "okd/oracle.hpp"

namespace {

std::vector<okd::BenchInput> make_suite(std::size_t count, std::size_t n) {
  std::vector<okd::BenchInput> suite;
  for (std::size_t i = 0; i < count; ++i) {
    okd::GenParams p;
    p.n = n;
    p.k = 1 + i % 3;
    p.seed = i;
    suite.push_back({okd::suite_id(i), okd::generate(okd::make_gen_spec(p))});
  }
  return suite;
}

okd::BenchConfig config() {
  okd::BenchConfig c;
  c.oracle.cross_check = false;
  return c;
}

void BM_SuiteSerial(benchmark::State& state) {
  const auto suite = make_suite(static_cast<std::size_t>(state.range(0)), 14);
  for (auto _ : state) benchmark::DoNotOptimize(okd::bench_suite_serial(suite, config()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SuiteSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SuiteParallel(benchmark::State& state) {
  const auto suite = make_suite(static_cast<std::size_t>(state.range(0)), 14);
  for (auto _ : state) benchmark::DoNotOptimize(okd::bench_suite(suite, config()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SuiteParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Run(benchmark::State& state) {
  okd::GenParams p;
  p.n = static_cast<std::size_t>(state.range(0));
  p.k = 4;
  p.horizon = 500;
  const okd::Instance inst = okd::generate(okd::make_gen_spec(p));
  const auto thresholds = okd::make_thresholds(inst, {});
  for (auto _ : state) benchmark::DoNotOptimize(okd::run(inst, thresholds));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Run)->Arg(1000)->Arg(10000);

void BM_SolveExact(benchmark::State& state) {
  okd::GenParams p;
  p.n = static_cast<std::size_t>(state.range(0));
  p.k = 2;
  p.seed = 3;
  const okd::Instance inst = okd::generate(okd::make_gen_spec(p));
  for (auto _ : state) benchmark::DoNotOptimize(okd::solve_exact(inst));
}
BENCHMARK(BM_SolveExact)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
