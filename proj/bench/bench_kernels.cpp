// Serial vs OpenMP: tableau pivot, exhaustive search, and a full sweep.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "vecfog/harness.hpp"
#include "vecfog/kernels.hpp"
#include "vecfog/solver.hpp"

using namespace vecfog;

namespace {

KernelBackend backend_arg(const benchmark::State& state) {
  return state.range(0) ? KernelBackend::OpenMP : KernelBackend::Serial;
}

void BM_Pivot(benchmark::State& state) {
  const KernelBackend backend = backend_arg(state);
  const auto rows = static_cast<std::size_t>(state.range(1));
  const std::size_t cols = rows * 2;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  std::vector<double> t(rows * cols);
  for (double& x : t) x = u(rng);
  std::size_t step = 0;
  for (auto _ : state) {
    // Walk the diagonal so pivots stay well away from zero.
    const std::size_t r = step % rows;
    pivot(backend, t.data(), rows, cols, r, r);
    ++step;
    benchmark::ClobberMemory();
  }
  state.SetLabel(std::string(backend_name(backend)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows * cols));
}
BENCHMARK(BM_Pivot)->ArgsProduct({{0, 1}, {100, 400, 1600}});

void BM_BruteForce(benchmark::State& state) {
  const KernelBackend backend = backend_arg(state);
  const Topology topo = build_multi_zone(2, 1, 0, 1, 1);
  const auto tasks = make_tasks(topo, Pattern::OneTaskEachCluster, Strategy::DA, 900, 0.001);
  const MilpModel m = build_model(topo, tasks, availability_for(topo, Case::CFA));
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force(m, 100.0, backend).objective);
  }
  state.SetLabel(std::string(backend_name(backend)));
}
BENCHMARK(BM_BruteForce)->Args({0})->Args({1})->Unit(benchmark::kMillisecond);

void BM_CaseMatrix(benchmark::State& state) {
  RunConfig cfg;
  cfg.scenario.pattern = Pattern::FiveTasksEachCluster;
  cfg.scenario.demands = high_demand_sweep();
  HarnessOptions opt;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_case_matrix(cfg, opt).size());
  }
  state.SetLabel(opt.parallel ? "parallel points" : "serial points");
}
BENCHMARK(BM_CaseMatrix)->Args({0})->Args({1})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
