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

#include <string>
#include <vector>

#include "pslsched/instance.hpp"

namespace pslsched {

/// Constraint families checked by `validate`.
///   release          fwd slot before the release r
///   precedence       bwd slot before fwd completion + l + l'
///   capacity         two tasks on one helper-slot
///   assignment       client not assigned to exactly one helper
///   memory           helper memory exceeded
///   fwd_quota        fwd slot count differs from p on the assigned edge
///   bwd_quota        bwd slot count differs from p' on the assigned edge
///   late_completion  completion later than the horizon
///   horizon          slot outside [0, T)
///   edge             assignment uses a non-edge
///   assigned_edge    triple on a helper the client is not assigned to
///   duplicate        same triple listed twice
///   index            unknown helper or client index
struct Violation {
  std::string tag;
  std::string message;
  int helper = -1;
  int client = -1;
  int slot = -1;
};

std::vector<Violation> validate(const ProblemInstance& instance,
                                const Assignment& assignment,
                                const Schedule& schedule);

/// One JSON object per line, indices translated to ids where valid.
std::string violations_to_jsonl(const ProblemInstance& instance,
                                const std::vector<Violation>& violations);

/// Throws InternalError listing the violations, if any.
void ensure_valid(const ProblemInstance& instance, const Assignment& assignment,
                  const Schedule& schedule, const char* producer);

struct BruteForceCaps {
  int max_clients = 4;
  int max_helpers = 2;
  int max_horizon = 40;
};

struct BruteForceResult {
  int makespan = 0;
  SolveOutcome witness;
  long long states = 0;
};

/// Exhaustive optimum over all memory-feasible assignments and all slot
/// fillings (idle slots included). Throws Error when the instance exceeds the
/// caps or no memory-feasible assignment exists.
BruteForceResult brute_force_optimum(const ProblemInstance& instance,
                                     const BruteForceCaps& caps = {});

}  // namespace pslsched
