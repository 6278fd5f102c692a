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

#include "pslsched/ilp_model.hpp"
#include "pslsched/instance.hpp"

namespace pslsched {

enum class ModelKind { full, fwd, w_subproblem, y_subproblem, correction };

/// Structured column map of a built model; -1 marks an absent column.
/// Edge-indexed vectors follow `ProblemInstance::edges()` order, slot-indexed
/// ones cover [0, horizon).
struct ModelLayout {
  ModelKind kind = ModelKind::full;
  int horizon = 0;
  std::vector<std::vector<int>> x;  // [edge][slot]
  std::vector<std::vector<int>> z;  // [edge][slot]
  std::vector<int> y;               // [edge]
  std::vector<int> phi, c, phif, cf;  // [client]
  int xi = -1;
  std::vector<int> slack_plus, slack_minus;  // [edge]
  std::vector<std::vector<int>> fwd_start, bwd_start;  // [edge][slot]
  std::vector<int> c_row, cf_row;  // completion equality rows per client
  /// Assignment held fixed by subproblem models (w, correction).
  std::vector<int> y_param;  // [edge] 0/1
  /// Fixed per-edge fwd slot counts of the y-subproblem.
  std::vector<int> x_sum;  // [edge]
};

struct BuiltModel {
  IlpModel model;
  ModelLayout layout;
};

/// Branching priorities used by the builders: assignment first, then slot
/// columns by increasing slot, auxiliaries last.
int slot_priority(int slot);

/// Full problem: release, precedence, unit capacity, totality, memory,
/// processing quotas, completion accounting, min-max via xi.
BuiltModel build_full(const ProblemInstance& instance);

/// Fwd-only problem over T_f.
BuiltModel build_fwd(const ProblemInstance& instance);

/// y given as 0/1 per edge (may be all zero). lambda per edge. rho > 0.
BuiltModel build_w_subproblem(const ProblemInstance& instance,
                              std::span<const int> y_fixed,
                              std::span<const double> lambda, double rho);

/// x_sum[e] = sum_t x_{e,t} of the fixed w; max_cf the fixed max c^f.
BuiltModel build_y_subproblem(const ProblemInstance& instance,
                              std::span<const int> x_sum,
                              std::span<const double> lambda, double rho,
                              double max_cf);

/// w-subproblem constraints plus hard quotas sum_t x = y* p. Throws Error if
/// y* is not total or violates memory.
BuiltModel build_feasibility_correction(const ProblemInstance& instance,
                                        std::span<const int> y_star,
                                        std::span<const double> lambda_star,
                                        double rho = 1.0);

/// Adds task-start columns and charges mu_i per start to c^f (and c for the
/// full model). No-op for helpers with mu_i = 0.
void add_switching_cost(BuiltModel& built, const ProblemInstance& instance);

/// Reads assignment (if the model has y columns, else y_param) and schedule.
void decode(const ProblemInstance& instance, const BuiltModel& built,
            std::span<const double> values, Assignment& assignment,
            Schedule& schedule);

/// Inverse of decode for a complete (assignment, schedule): fills every
/// column so the point is feasible whenever the pair is valid.
std::vector<double> encode(const ProblemInstance& instance,
                           const BuiltModel& built,
                           const Assignment& assignment,
                           const Schedule& schedule);

/// Per-edge helper: y as 0/1 vector in edge order.
std::vector<int> assignment_to_edge_vector(const ProblemInstance& instance,
                                           const Assignment& assignment);
Assignment edge_vector_to_assignment(const ProblemInstance& instance,
                                     std::span<const int> y);

}  // namespace pslsched
