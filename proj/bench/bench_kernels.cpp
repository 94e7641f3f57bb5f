// Serial reference kernels against their OpenMP counterparts.

#include "bglasso/campaign.hpp"
#include "bglasso/kernels.hpp"

#include <benchmark/benchmark.h>

using namespace bglasso;

namespace {

Matrix spd(Index p) {
  RngStream rng(11, 0);
  Matrix b(p, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i) b(i, j) = rng.normal();
  Matrix a = b * b.transpose() / static_cast<double>(p);
  a.diagonal().array() += 1.0;
  return a;
}

Matrix data(Index n, Index p) {
  RngStream rng(12, 0);
  Matrix y(n, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) y(i, j) = rng.normal();
  return y;
}

template <bool Parallel>
void BM_Cholesky(benchmark::State& state) {
  const Matrix a = spd(state.range(0));
  Matrix l;
  for (auto _ : state) {
    const bool ok = Parallel ? kernels::cholesky_parallel(a, l, kPdTolerance)
                             : kernels::cholesky_serial(a, l, kPdTolerance);
    benchmark::DoNotOptimize(ok);
    benchmark::DoNotOptimize(l.data());
  }
}

template <bool Parallel>
void BM_Crossprod(benchmark::State& state) {
  const Matrix y = data(2 * state.range(0), state.range(0));
  for (auto _ : state) {
    Matrix s = Parallel ? kernels::crossprod_parallel(y) : kernels::crossprod_serial(y);
    benchmark::DoNotOptimize(s.data());
  }
}

template <Execution E>
void BM_Replications(benchmark::State& state) {
  ScenarioConfig c;
  c.design = DesignKind::ar1;
  c.p = 30;
  c.n = 50;
  c.sampler = SamplerKind::hrs;
  c.replications = static_cast<int>(state.range(0));
  c.burn_in = 50;
  c.draws = 50;
  for (auto _ : state) benchmark::DoNotOptimize(run_replications(c, E));
}

}  // namespace

BENCHMARK(BM_Cholesky<false>)->Name("cholesky/serial")->Arg(32)->Arg(128)->Arg(512);
BENCHMARK(BM_Cholesky<true>)->Name("cholesky/parallel")->Arg(32)->Arg(128)->Arg(512);
BENCHMARK(BM_Crossprod<false>)->Name("crossprod/serial")->Arg(32)->Arg(128)->Arg(512);
BENCHMARK(BM_Crossprod<true>)->Name("crossprod/parallel")->Arg(32)->Arg(128)->Arg(512);
BENCHMARK(BM_Replications<Execution::serial>)->Name("replications/serial")->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Replications<Execution::parallel>)->Name("replications/parallel")->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
