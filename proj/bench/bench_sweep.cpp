// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "pmom/lambda_sieve.hpp"
#include "pmom/sweep.hpp"

using namespace pmom;

namespace {

const std::vector<double> kOrders{1.0, 2.1, 3.2, 4.3, 5.4, 6.5};

void BM_SieveReference(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_prime_powers_reference(limit).events.size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SieveSegmented(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_prime_powers({.limit = limit}).events.size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepReference(benchmark::State& state) {
  const auto w = WindowSpec::scaled(Rational(state.range(0)), Rational(1, 1000));
  const auto events = enumerate_prime_powers({.limit = required_sieve_limit(w)});
  for (auto _ : state) benchmark::DoNotOptimize(sweep_moments_reference(w, kOrders, events).piece_count);
}

void BM_SweepParallel(benchmark::State& state) {
  const auto w = WindowSpec::scaled(Rational(state.range(0)), Rational(1, 1000));
  const auto events = enumerate_prime_powers({.limit = required_sieve_limit(w)});
  for (auto _ : state) benchmark::DoNotOptimize(sweep_moments(w, kOrders, {.events = &events}).piece_count);
}

void BM_SweepStreaming(benchmark::State& state) {
  const auto w = WindowSpec::scaled(Rational(state.range(0)), Rational(1, 1000));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_moments(w, kOrders).piece_count);
}

}  // namespace

BENCHMARK(BM_SieveReference)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SieveSegmented)->Arg(1 << 20)->Arg(1 << 24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepReference)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepStreaming)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
