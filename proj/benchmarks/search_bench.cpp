// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "varietylab/regulator_game.hpp"
#include "varietylab/variety.hpp"

namespace {

using namespace varietylab;

std::vector<Label> numbered(std::size_t n, const std::string& prefix) {
  std::vector<Label> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

OutcomeTable modular(std::size_t n_d, std::size_t n_r) {
  std::vector<std::vector<Label>> g(n_d, std::vector<Label>(n_r));
  for (std::size_t d = 0; d < n_d; ++d) {
    for (std::size_t r = 0; r < n_r; ++r) g[d][r] = std::to_string((d + n_d - r) % n_d);
  }
  return OutcomeTable(numbered(n_d, "d"), numbered(n_r, "r"), g);
}

void BM_Variety(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) total += (x = static_cast<double>(rng() % 100 + 1));
  for (auto& x : p) x /= total;
  const Distribution dist(numbered(n, "e"), p);
  for (auto _ : state) benchmark::DoNotOptimize(variety(dist));
}
BENCHMARK(BM_Variety)->Arg(4)->Arg(16)->Arg(256);

void BM_BruteForce(benchmark::State& state) {
  const auto table = modular(static_cast<std::size_t>(state.range(0)), 4);
  SearchOptions options;
  options.workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(min_outcome_variety_bruteforce(table, options));
}
BENCHMARK(BM_BruteForce)
    ->Args({8, 1})
    ->Args({8, 0})
    ->Args({10, 1})
    ->Args({10, 0})
    ->Unit(benchmark::kMillisecond);

void BM_Greedy(benchmark::State& state) {
  const auto table = modular(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_policy(table));
}
BENCHMARK(BM_Greedy)->Arg(8)->Arg(32);

}  // namespace
