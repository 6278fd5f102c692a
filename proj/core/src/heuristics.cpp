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

#include "pslsched/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <numeric>
#include <random>
#include <tuple>

#include "pslsched/bwd_scheduler.hpp"

namespace pslsched {

namespace {

using Clock = std::chrono::steady_clock;

struct QueuedTask {
  int arrival;
  int client;
  int bwd;  // 0 fwd, 1 bwd

  bool operator<(const QueuedTask& o) const {
    return std::tie(arrival, client, bwd) < std::tie(o.arrival, o.client, o.bwd);
  }
};

constexpr double kMemTol = 1e-9;

}  // namespace

std::vector<HelperLoad> helper_loads(const ProblemInstance& in,
                                     const Assignment& a) {
  std::vector<HelperLoad> out;
  for (int i = 0; i < in.num_helpers(); ++i) {
    out.push_back({i, 0, in.memory_capacity()[static_cast<size_t>(i)]});
  }
  for (int j = 0; j < static_cast<int>(a.helper_of.size()); ++j) {
    const int i = a.helper_of[static_cast<size_t>(j)];
    if (i < 0) continue;
    ++out[static_cast<size_t>(i)].load;
    out[static_cast<size_t>(i)].free_memory -=
        in.memory_demand()[static_cast<size_t>(j)];
  }
  return out;
}

Schedule fcfs_schedule(const ProblemInstance& in, const Assignment& a) {
  if (static_cast<int>(a.helper_of.size()) != in.num_clients()) {
    throw Error("assignment size mismatch");
  }
  Schedule s;
  for (int i = 0; i < in.num_helpers(); ++i) {
    std::vector<QueuedTask> waiting;
    for (int j = 0; j < in.num_clients(); ++j) {
      if (a.helper_of[static_cast<size_t>(j)] != i) continue;
      waiting.push_back({in.timing(j, i).r, j, 0});
    }
    int t = 0;
    while (!waiting.empty()) {
      auto next = std::min_element(waiting.begin(), waiting.end());
      const QueuedTask task = *next;
      waiting.erase(next);
      t = std::max(t, task.arrival);
      const EdgeTiming& e = in.timing(task.client, i);
      const int len = task.bwd ? e.p_prime : e.p;
      for (int k = 0; k < len; ++k) {
        (task.bwd ? s.bwd : s.fwd).push_back({i, task.client, t + k});
      }
      t += len;
      if (!task.bwd) waiting.push_back({bwd_release(e, t), task.client, 1});
    }
  }
  s.normalize();
  return s;
}

SolveOutcome balanced_greedy(const ProblemInstance& in,
                             std::span<const int> client_order) {
  const auto start = Clock::now();
  std::vector<int> order(client_order.begin(), client_order.end());
  if (order.empty()) {
    order.resize(static_cast<size_t>(in.num_clients()));
    std::iota(order.begin(), order.end(), 0);
  }
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < static_cast<int>(sorted.size()); ++k) {
    if (sorted.size() != static_cast<size_t>(in.num_clients()) ||
        sorted[static_cast<size_t>(k)] != k) {
      throw Error("client order must be a permutation of the clients");
    }
  }
  Assignment a = Assignment::unassigned(in.num_clients());
  std::vector<int> load(static_cast<size_t>(in.num_helpers()), 0);
  std::vector<double> free = in.memory_capacity();
  for (int j : order) {
    const double d = in.memory_demand()[static_cast<size_t>(j)];
    int best = -1;
    for (int i : in.helpers_of(j)) {
      if (free[static_cast<size_t>(i)] + kMemTol < d) continue;
      if (best < 0 || load[static_cast<size_t>(i)] < load[static_cast<size_t>(best)]) {
        best = i;
      }
    }
    if (best < 0) throw Error("memory-infeasible under greedy order");
    a.helper_of[static_cast<size_t>(j)] = best;
    ++load[static_cast<size_t>(best)];
    free[static_cast<size_t>(best)] -= d;
  }
  Schedule s = fcfs_schedule(in, a);
  SolveOutcome out = assemble_outcome(in, a, std::move(s.fwd), std::move(s.bwd));
  out.stats.solver = "balanced-greedy";
  out.stats.wall_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

SolveOutcome baseline_random_fcfs(const ProblemInstance& in,
                                  std::uint64_t seed) {
  const auto start = Clock::now();
  constexpr int kMaxRestarts = 100;
  for (int attempt = 0; attempt <= kMaxRestarts; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::vector<int> order(static_cast<size_t>(in.num_clients()));
    std::iota(order.begin(), order.end(), 0);
    // Explicit Fisher-Yates: std::shuffle's draws are library-specific.
    for (size_t k = order.size(); k > 1; --k) {
      std::swap(order[k - 1], order[rng() % k]);
    }
    Assignment a = Assignment::unassigned(in.num_clients());
    std::vector<double> free = in.memory_capacity();
    bool dead_end = false;
    for (int j : order) {
      const double d = in.memory_demand()[static_cast<size_t>(j)];
      std::vector<int> feasible;
      for (int i : in.helpers_of(j)) {
        if (free[static_cast<size_t>(i)] + kMemTol >= d) feasible.push_back(i);
      }
      if (feasible.empty()) {
        dead_end = true;
        break;
      }
      const int i = feasible[rng() % feasible.size()];
      a.helper_of[static_cast<size_t>(j)] = i;
      free[static_cast<size_t>(i)] -= d;
    }
    if (dead_end) continue;
    Schedule s = fcfs_schedule(in, a);
    SolveOutcome out =
        assemble_outcome(in, a, std::move(s.fwd), std::move(s.bwd));
    out.stats.solver = "baseline";
    out.stats.iterations = attempt + 1;
    out.stats.notes = "restarts=" + std::to_string(attempt);
    out.stats.wall_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    return out;
  }
  throw Error("random assignment hit a memory dead end 101 times");
}

}  // namespace pslsched
