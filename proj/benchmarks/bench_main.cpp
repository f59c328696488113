#include <benchmark/benchmark.h>

#include <random>

#include "pintersect/counting.hpp"
#include "pintersect/fourier.hpp"
#include "pintersect/intersective.hpp"
#include "pintersect/primes.hpp"

using namespace pintersect;

namespace {

const RootBook& book() {
  static const RootBook b(IntPoly{-1, 0, 1});
  return b;
}

IndexSet random_set(u64 L, double density) {
  std::mt19937_64 rng(20240601);
  std::bernoulli_distribution coin(density);
  IndexSet B{L, {}};
  for (u64 x = 1; x <= L; ++x)
    if (coin(rng)) B.members.push_back(x);
  return B;
}

}  // namespace

static void BM_Sieve(benchmark::State& state) {
  const auto limit = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sieve(limit));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sieve)->RangeMultiplier(10)->Range(100'000, 10'000'000)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_PsiCumulative(benchmark::State& state) {
  const auto table = shared_primes(1'000'000);
  for (auto _ : state) benchmark::DoNotOptimize(psi_cumulative(*table, 1'000'000, 1, 4));
}
BENCHMARK(BM_PsiCumulative)->Unit(benchmark::kMillisecond);

static void BM_CountDirect(benchmark::State& state) {
  const auto L = static_cast<u64>(state.range(0));
  const auto aux = book().aux(1);
  const auto wp = weighted_primes(aux, L, 10);
  const auto B = random_set(L, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(count_R_direct(B, aux, wp));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountDirect)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_CountFft(benchmark::State& state) {
  const auto L = static_cast<u64>(state.range(0));
  const auto aux = book().aux(1);
  const auto wp = weighted_primes(aux, L, 10);
  const auto B = random_set(L, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(count_R_fft(B, aux, wp));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CountFft)->RangeMultiplier(4)->Range(1 << 12, 1 << 18)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_GaussSumsAll(benchmark::State& state) {
  const auto q = static_cast<u64>(state.range(0));
  const auto aux = book().aux(1);
  for (auto _ : state) benchmark::DoNotOptimize(gauss_sums_all(aux, q));
}
BENCHMARK(BM_GaussSumsAll)->Arg(97)->Arg(1000)->Arg(4999)->Unit(benchmark::kMillisecond);

static void BM_TwistedSplit(benchmark::State& state) {
  const IntPoly g{-1, 0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(twisted_gauss_sum_split(g, 3, 1, 17, 2 * 3 * 5 * 7 * 11 * 13));
}
BENCHMARK(BM_TwistedSplit);

static void BM_TwistedDirect(benchmark::State& state) {
  const IntPoly g{-1, 0, 1};
  for (auto _ : state) benchmark::DoNotOptimize(twisted_gauss_sum_direct(g, 3, 1, 17, 2 * 3 * 5 * 7 * 11 * 13));
}
BENCHMARK(BM_TwistedDirect);

static void BM_WeylSum(benchmark::State& state) {
  const auto L = static_cast<u64>(state.range(0));
  const auto aux = book().aux(1);
  const auto wp = weighted_primes(aux, L, 10);
  const auto alpha = Frequency::real(0.318309886183791);
  for (auto _ : state) benchmark::DoNotOptimize(weyl_sum(aux, wp, wp.M_floor, alpha));
}
BENCHMARK(BM_WeylSum)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMicrosecond);

static void BM_L2Concentration(benchmark::State& state) {
  const auto L = static_cast<u64>(state.range(0));
  const auto B = random_set(L, 0.1);
  const auto arcs = make_arcs(L, 0.5, 2.25);
  const u64 grid = default_grid(L);
  for (auto _ : state) benchmark::DoNotOptimize(l2_concentration(B, arcs, grid));
}
BENCHMARK(BM_L2Concentration)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
