#include <benchmark/benchmark.h>

#include "sclrom/cyclic.hpp"
#include "sclrom/datagen.hpp"
#include "sclrom/model.hpp"
#include "sclrom/random.hpp"

namespace {

using namespace sclrom;

void BM_CyclicOperator(benchmark::State& state) {
  const Index n = state.range(0);
  const Index m = state.range(1);
  const VectorSystem vs(random_orthonormal_frame(n, m, 1));
  for (auto _ : state) benchmark::DoNotOptimize(cyclic_operator(vs));
}
BENCHMARK(BM_CyclicOperator)->Args({64, 8})->Args({128, 16})->Args({256, 32});

void BM_BuildOhf(benchmark::State& state) {
  const Index n = state.range(0);
  const Index m = state.range(1);
  GaussianSource rng(2);
  const SnapshotHistory h(rng.complex_matrix(n, m));
  for (auto _ : state) benchmark::DoNotOptimize(build_ohf(h));
}
BENCHMARK(BM_BuildOhf)->Args({64, 8})->Args({128, 16})->Args({256, 32});

void BM_FitMonomial(benchmark::State& state) {
  const SnapshotHistory h = gen_periodic_history(state.range(0), state.range(1), 3);
  for (auto _ : state) benchmark::DoNotOptimize(fit(h));
}
BENCHMARK(BM_FitMonomial)->Args({64, 8})->Args({256, 32});

void BM_FitLeastSquares(benchmark::State& state) {
  const Index T = state.range(1);
  const SnapshotHistory h = gen_almost_periodic_history(state.range(0), T, 1e-3, 2 * T, 4).noisy;
  FitOptions opts;
  opts.mode = FitMode::least_squares;
  opts.history_size = T;
  for (auto _ : state) benchmark::DoNotOptimize(fit(h, opts));
}
BENCHMARK(BM_FitLeastSquares)->Args({64, 8})->Args({256, 32});

void BM_Predict(benchmark::State& state) {
  const SclRomModel model = fit(gen_periodic_history(state.range(0), state.range(1), 5)).model;
  std::uint64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(predict(model, t++));
}
BENCHMARK(BM_Predict)->Args({64, 8})->Args({256, 32});

void BM_WaveSimulation(benchmark::State& state) {
  WaveConfig cfg;
  cfg.nx = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_wave_1d(cfg));
}
BENCHMARK(BM_WaveSimulation)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
