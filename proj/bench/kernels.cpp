#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "specoarse/coarsen.hpp"
#include "specoarse/generators.hpp"
#include "specoarse/pipeline.hpp"
#include "specoarse/sparse_matrix.hpp"

using namespace specoarse;

namespace {

SparseMatrix cube(std::size_t side) {
  const std::size_t dims[] = {side, side, side};
  return gen_laplacian(dims);
}

void BM_MatvecSerial(benchmark::State& state) {
  const auto a = cube(static_cast<std::size_t>(state.range(0)));
  std::vector<double> x(a.ncols(), 1.0), y(a.nrows());
  for (auto _ : state) {
    serial::matvec(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

void BM_MatvecParallel(benchmark::State& state) {
  const auto a = cube(static_cast<std::size_t>(state.range(0)));
  std::vector<double> x(a.ncols(), 1.0), y(a.nrows());
  for (auto _ : state) {
    matvec(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

void BM_GalerkinSerial(benchmark::State& state) {
  const auto a = cube(static_cast<std::size_t>(state.range(0)));
  const auto p = build_interpolation(bfs_graph_partition(a, a.nrows() / 10, 1), true);
  for (auto _ : state) benchmark::DoNotOptimize(serial::galerkin_product(a, p));
}

void BM_GalerkinParallel(benchmark::State& state) {
  const auto a = cube(static_cast<std::size_t>(state.range(0)));
  const auto p = build_interpolation(bfs_graph_partition(a, a.nrows() / 10, 1), true);
  for (auto _ : state) benchmark::DoNotOptimize(galerkin_product(a, p));
}

// Whole estimate on sky:10x10x10 with the sample loop on 1 or all workers.
void BM_EstimateWorkers(benchmark::State& state) {
  const auto a = generate(parse_generator_spec("sky:10x10x10"));
  SampleConfig cfg;
  cfg.samples = 8;
  cfg.n_aggregates = 100;
  cfg.per_sample = 4;
  cfg.seed = 3;
  cfg.workers = state.range(0) == 0 ? omp_get_max_threads() : static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_eigenvalues(a, cfg));
  state.counters["workers"] = cfg.workers;
}

}  // namespace

BENCHMARK(BM_MatvecSerial)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GalerkinSerial)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GalerkinParallel)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateWorkers)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
