// Copyright 2026 The pslsched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "pslsched/admm.hpp"
#include "pslsched/bwd_scheduler.hpp"
#include "pslsched/exact.hpp"
#include "pslsched/heuristics.hpp"
#include "pslsched/scenario.hpp"

using namespace pslsched;

namespace {

ProblemInstance scenario(int clients, int helpers, int which = 2) {
  ScenarioSpec spec;
  spec.scenario = which;
  spec.num_clients = clients;
  spec.num_helpers = helpers;
  spec.seed = 11;
  return generate(spec);
}

void BM_BwdBlocks(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(3);
  std::vector<BwdTask> tasks;
  int total = 0;
  for (int k = 0; k < n; ++k) {
    BwdTask t{k, static_cast<int>(rng() % (4 * n)), 1 + static_cast<int>(rng() % 6),
              static_cast<int>(rng() % 20)};
    total += t.processing;
    tasks.push_back(t);
  }
  std::vector<int> eligible;
  for (int s = 0; s < 8 * n + total; ++s) {
    if (rng() % 4) eligible.push_back(s);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(schedule_bwd_on_helper(tasks, eligible).max_cost);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_BwdBlocks)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_BalancedGreedy(benchmark::State& state) {
  const ProblemInstance in = scenario(static_cast<int>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(balanced_greedy(in).makespan);
}
BENCHMARK(BM_BalancedGreedy)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Baseline(benchmark::State& state) {
  const ProblemInstance in = scenario(static_cast<int>(state.range(0)), 10);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(baseline_random_fcfs(in, ++seed).makespan);
}
BENCHMARK(BM_Baseline)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Exact(benchmark::State& state) {
  const ProblemInstance in =
      scenario(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(in).makespan);
}
BENCHMARK(BM_Exact)->Args({10, 2})->Args({10, 5})->Args({15, 5})
    ->Unit(benchmark::kMillisecond);

void BM_Admm(benchmark::State& state) {
  const ProblemInstance in = scenario(static_cast<int>(state.range(0)), 2);
  AdmmConfig cfg;
  cfg.tau_max = 3;
  for (auto _ : state) benchmark::DoNotOptimize(admm_plus_bwd(in, cfg).makespan);
}
BENCHMARK(BM_Admm)->Arg(6)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
