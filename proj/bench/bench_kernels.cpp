// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qfair/kernels.hpp"

namespace {

using qfair::Complex;
namespace k = qfair::kernels;

std::vector<Complex> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<Complex> v(n);
  for (auto& z : v) z = {d(rng), d(rng)};
  return v;
}

template <auto Matvec>
void BM_Matvec(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(dim * dim, 1);
  const auto x = random_vector(dim, 2);
  std::vector<Complex> y(dim);
  for (auto _ : state) {
    Matvec(a, dim, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dim * dim));
}

template <auto Matmul>
void BM_Matmul(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto a = random_vector(dim * dim, 3);
  const auto b = random_vector(dim * dim, 4);
  std::vector<Complex> c(dim * dim);
  for (auto _ : state) {
    Matmul(a, b, dim, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dim * dim * dim));
}

// One amplification step on an n-qubit statevector: oracle then state reflection.
template <auto Oracle, auto Reflect>
void BM_GroverStep(benchmark::State& state) {
  const auto dim = std::size_t{1} << state.range(0);
  auto psi = random_vector(dim, 5);
  const double norm = std::sqrt(k::serial::norm_squared(psi));
  for (auto& z : psi) z /= norm;
  auto x = psi;
  for (auto _ : state) {
    Oracle(x, dim >> 1, dim >> 1);
    Reflect(psi, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dim));
}

BENCHMARK(BM_Matvec<k::serial::matvec>)->Name("matvec/serial")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_Matvec<k::parallel::matvec>)->Name("matvec/omp")->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_Matmul<k::serial::matmul>)->Name("matmul/serial")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_Matmul<k::parallel::matmul>)->Name("matmul/omp")->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_GroverStep<k::serial::oracle_reflect, k::serial::state_reflect>)
    ->Name("grover_step/serial")->DenseRange(12, 20, 4);
BENCHMARK(BM_GroverStep<k::parallel::oracle_reflect, k::parallel::state_reflect>)
    ->Name("grover_step/omp")->DenseRange(12, 20, 4);

}  // namespace

BENCHMARK_MAIN();
