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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pslsched/instance.hpp"

namespace pslsched {

struct HelperLoad {
  int helper = 0;  // index
  int load = 0;    // assigned clients
  double free_memory = 0.0;
};

std::vector<HelperLoad> helper_loads(const ProblemInstance& instance,
                                     const Assignment& assignment);

/// Non-preemptive schedule of a fixed assignment: per helper, one queue of
/// arrived tasks served in (arrival, client index, fwd before bwd) order.
/// Fwd tasks arrive at r, bwd tasks at phi^f + l + l'.
Schedule fcfs_schedule(const ProblemInstance& instance,
                       const Assignment& assignment);

/// Each client in `client_order` (instance order when empty) goes to the
/// least-loaded connected helper with enough free memory, ties to the lowest
/// helper index; then fcfs_schedule. Throws Error("memory-infeasible under
/// greedy order") when some client finds no helper.
SolveOutcome balanced_greedy(const ProblemInstance& instance,
                             std::span<const int> client_order = {});

/// Clients shuffled by the seed, each sent to a uniformly chosen
/// memory-feasible helper; on a dead end the draw restarts with seed + 1,
/// at most 100 times. Scheduling as in fcfs_schedule.
SolveOutcome baseline_random_fcfs(const ProblemInstance& instance,
                                  std::uint64_t seed);

}  // namespace pslsched
