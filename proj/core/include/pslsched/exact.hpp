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

#include <climits>
#include <span>
#include <vector>

#include "pslsched/ilp_solver.hpp"
#include "pslsched/instance.hpp"

namespace pslsched {

struct HelperSolution {
  /// Minimum over schedules of max(c_j); when the search was cut off this is
  /// only a lower bound (>= cutoff) and `optimal` is false.
  int makespan = 0;
  bool optimal = true;
  bool timed_out = false;
  std::vector<SlotTriple> fwd;  // empty unless a schedule was found
  std::vector<SlotTriple> bwd;
  long long nodes = 0;
};

/// Exact preemptive schedule of `clients` (indices) on one helper. Only
/// schedules with makespan < `cutoff` are searched for; if none exists the
/// result reports makespan >= cutoff without a schedule. A positive time
/// limit may end the search early (optimal = false, best schedule kept).
HelperSolution solve_single_helper(const ProblemInstance& instance, int helper,
                                   std::span<const int> clients,
                                   int cutoff = INT_MAX,
                                   double time_limit_sec = 0.0);

struct ExactConfig {
  double time_limit_sec = 600.0;
};

/// Minimum makespan: search over memory-feasible assignments (identical
/// helpers are interchangeable) with memoized per-helper optima. Stats carry
/// the optimality flag and, when the limit hits, the proven lower bound.
SolveOutcome solve_exact(const ProblemInstance& instance,
                         const ExactConfig& config = {});

/// Branch and bound on the full time-indexed model.
SolveOutcome solve_ilp(const ProblemInstance& instance,
                       const SolverConfig& config = {});

}  // namespace pslsched
