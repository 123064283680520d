#include <benchmark/benchmark.h>

#include "first/estimators.hpp"
#include "first/neighbors.hpp"
#include "first/selection.hpp"
#include "first/synthetic.hpp"

using namespace first;

namespace {

Dataset friedman_data(std::size_t p, std::size_t n) {
  return generate_regression(CopulaSpec::autoregressive(p, 0.0),
                             benchmark_function(BenchmarkId::friedman), 1.0, n, 1);
}

void BM_WithinKth(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dims = static_cast<std::size_t>(state.range(1));
  const auto m = encode(friedman_data(std::max<std::size_t>(dims, 10), n), false);
  std::vector<std::size_t> factors(dims);
  for (std::size_t j = 0; j < dims; ++j) factors[j] = j;
  const NeighborIndex index(m, factors);
  NeighborIndex::Scratch scratch;
  std::vector<Neighbor> out;
  std::size_t row = 0;
  for (auto _ : state) {
    index.within_kth(row, 2, scratch, out);
    benchmark::DoNotOptimize(out.data());
    row = (row + 1) % n;
  }
}
BENCHMARK(BM_WithinKth)->Args({1000, 3})->Args({10'000, 3})->Args({10'000, 10});

void BM_IndexBuild(benchmark::State& state) {
  const auto m = encode(friedman_data(10, static_cast<std::size_t>(state.range(0))), false);
  const std::vector<std::size_t> factors{0, 6, 7, 8, 9};
  for (auto _ : state) benchmark::DoNotOptimize(NeighborIndex(m, factors).size());
}
BENCHMARK(BM_IndexBuild)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMicrosecond);

void BM_Nanne(benchmark::State& state) {
  const auto d = friedman_data(10, static_cast<std::size_t>(state.range(0)));
  const auto m = encode(d, false);
  EstimatorConfig cfg;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(nanne(m, d.response(), cfg).total_var);
}
BENCHMARK(BM_Nanne)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_FirstFriedman(benchmark::State& state) {
  const auto d = friedman_data(static_cast<std::size_t>(state.range(0)), 1000);
  const auto m = encode(d, false);
  EstimatorConfig cfg;
  cfg.workers = 1;
  for (auto _ : state) {
    const auto t = state.range(1) ? first_fast_select(m, d.response(), cfg)
                                  : first_select(m, d.response(), cfg);
    benchmark::DoNotOptimize(t.importance.data());
  }
}
BENCHMARK(BM_FirstFriedman)->Args({50, 0})->Args({50, 1})->Unit(benchmark::kMillisecond);

void BM_DoubleMc(benchmark::State& state) {
  const auto f = benchmark_function(BenchmarkId::ishigami);
  const auto spec = CopulaSpec::autoregressive(3, 0.5);
  DoubleMcOptions opt;
  opt.n_outer = static_cast<std::size_t>(state.range(0));
  opt.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(double_mc_total_sobol(spec, f, 0, opt).index);
}
BENCHMARK(BM_DoubleMc)->Arg(100'000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
