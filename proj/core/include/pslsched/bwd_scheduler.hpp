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

#include <span>
#include <vector>

#include "pslsched/instance.hpp"

namespace pslsched {

/// One bwd task on a single helper. `label` is only used for tie-breaking
/// (smaller first) and reporting; the scheduler knows nothing about ids.
struct BwdTask {
  int label = 0;
  int release = 0;     // absolute slot
  int processing = 1;  // p'
  int tail = 0;        // pi = r'
};

/// A non-idle period of a FCFS schedule. `start`/`end` are absolute slots;
/// members are positions into the task list, in FCFS order.
struct Block {
  std::vector<int> members;
  int start = 0;
  int end = 0;
  int chosen = -1;  // task moved into the gaps (the argmin of end + tail)
  int depth = 0;    // 0 for the initial decomposition
};

struct HelperBwdSchedule {
  std::vector<std::vector<int>> slots;  // per task, ascending absolute slots
  std::vector<int> finish;              // per task, phi
  std::vector<Block> blocks;            // every block visited, in visit order
  int max_cost = 0;                     // max(phi + tail)
};

/// Slots in [0, horizon) not occupied by the helper's fwd triples.
std::vector<int> eligible_slots(int helper, std::span<const SlotTriple> fwd,
                                int horizon);

/// Optimal preemptive single-helper schedule minimizing max(phi + tail) over
/// the given eligible slots. Throws Error("horizon exhausted") if the tasks
/// cannot all be placed.
HelperBwdSchedule schedule_bwd_on_helper(std::span<const BwdTask> tasks,
                                         std::span<const int> eligible);

struct BwdOptions {
  /// With a nonzero switching cost the block algorithm is no longer optimal;
  /// when set, such helpers are solved with the exact ILP instead.
  bool exact_when_switching = true;
  double exact_time_limit_sec = 60.0;
};

/// Bwd release of client j given its fwd finish: phi^f + l + l'.
int bwd_release(const EdgeTiming& e, int fwd_finish);

/// Schedules every helper's bwd tasks given a fixed assignment and fwd slots.
/// Returns the bwd triples, sorted.
std::vector<SlotTriple> schedule_bwd(const ProblemInstance& instance,
                                     const Assignment& assignment,
                                     std::span<const SlotTriple> fwd,
                                     const BwdOptions& options = {});

/// Merges the parts into a validated SolveOutcome. A validation failure is a
/// bug and raises InternalError.
SolveOutcome assemble_outcome(const ProblemInstance& instance,
                              const Assignment& assignment,
                              std::vector<SlotTriple> fwd,
                              std::vector<SlotTriple> bwd);

}  // namespace pslsched
