#include <benchmark/benchmark.h>

#include <random>

#include "qanneal/dynamics.hpp"
#include "qanneal/instance.hpp"
#include "qanneal/spectral.hpp"

using namespace qanneal;

namespace {

AnnealerKind kind_of(int64_t i) { return static_cast<AnnealerKind>(i); }

// rows x cols lattice from the arguments
ProblemInstance instance(const benchmark::State& state) {
  return make_instance(static_cast<int>(state.range(1)), static_cast<int>(state.range(2)), 1, 0);
}

void BM_Matvec(benchmark::State& state) {
  const auto parts = build_parts(kind_of(state.range(0)), instance(state));
  const auto h = parts.schedule().at(0.5);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd x(static_cast<Eigen::Index>(parts.dim())), y(x.size());
  for (auto& c : x) c = {gauss(rng), gauss(rng)};
  for (auto _ : state) {
    h.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dim"] = static_cast<double>(parts.dim());
}
BENCHMARK(BM_Matvec)->ArgsProduct({{0, 1, 2}, {3}, {4}})->Args({1, 4, 4});

void BM_KrylovStep(benchmark::State& state) {
  const auto parts = build_parts(kind_of(state.range(0)), instance(state));
  const auto h = parts.schedule().at(0.5);
  KrylovPropagator propagator(parts.dim());
  Eigen::VectorXcd psi = initial_state(parts);
  for (auto _ : state) propagator.step(h, psi, 0.025);
  state.counters["dim"] = static_cast<double>(parts.dim());
}
BENCHMARK(BM_KrylovStep)->ArgsProduct({{0, 1, 2}, {2, 3}, {4}});

void BM_LowestEigs(benchmark::State& state) {
  const auto parts = build_parts(kind_of(state.range(0)), instance(state));
  const auto h = parts.schedule().at(0.5);
  EigenOptions options;
  options.method = EigenMethod::iterative;
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigs(h, static_cast<int>(state.range(3)), options));
}
BENCHMARK(BM_LowestEigs)->ArgsProduct({{0, 2}, {3}, {4}, {3, 12}})->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const auto inst = instance(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve_partition_bruteforce(inst.graph));
}
BENCHMARK(BM_BruteForce)->Args({0, 3, 4})->Args({0, 4, 4})->Args({0, 4, 5})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
