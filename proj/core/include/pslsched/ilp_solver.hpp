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
#include <string>
#include <vector>

#include "pslsched/ilp_model.hpp"

namespace pslsched {

enum class BoundMode {
  lp,             // LP relaxation, combined with the model's hook
  combinatorial,  // objective activity bound and the model's hook only
};

enum class BranchingRule {
  priority,  // highest priority, then most fractional (LP) or lowest column
  random,    // highest priority, ties broken by a seeded RNG
};

struct SolverConfig {
  double time_limit_sec = 60.0;
  double gap_tolerance = 0.0;  // relative, in [0, 1)
  long long node_limit = 0;    // 0 = unlimited
  BoundMode bound = BoundMode::lp;
  BranchingRule branching = BranchingRule::priority;
  std::uint64_t seed = 0;
  /// LP bounds are skipped at nodes whose reduced LP has more columns.
  int lp_max_columns = 2500;
  /// Optional starting incumbent; ignored if infeasible.
  std::vector<double> warm_start;
};

enum class SolveStatus { optimal, feasible, infeasible, limit };

const char* to_string(SolveStatus status);

struct SolverResult {
  SolveStatus status = SolveStatus::limit;
  std::vector<double> values;  // empty when no incumbent
  double objective = 0.0;
  double best_bound = 0.0;
  long long nodes = 0;
  double wall_seconds = 0.0;

  bool has_incumbent() const { return !values.empty(); }
};

/// Branch and bound over all (binary and integer) columns.
SolverResult solve(const IlpModel& model, const SolverConfig& config = {});

/// Optimal value of the continuous relaxation; throws Error if the
/// relaxation is infeasible or unbounded.
double lp_bound(const IlpModel& model);

}  // namespace pslsched
