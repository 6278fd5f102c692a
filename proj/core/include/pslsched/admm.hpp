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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pslsched/bwd_scheduler.hpp"
#include "pslsched/ilp_solver.hpp"
#include "pslsched/instance.hpp"

namespace pslsched {

enum class SubproblemMode { exact, inexact };

/// Limits used for the subproblem solves. Inexact runs stop at a node limit
/// and keep whatever incumbent they have.
SolverConfig subproblem_limits(SubproblemMode mode);

struct AdmmConfig {
  double rho = 1.0;
  double eps1 = 0.5;  // assignment changes
  double eps2 = 0.5;  // change of max c^f, slots
  int tau_max = 10;
  SubproblemMode mode = SubproblemMode::inexact;
  SolverConfig limits = subproblem_limits(SubproblemMode::inexact);
  /// Starting assignment; all-zero when empty.
  std::optional<Assignment> initial;

  /// Throws Error on rho <= 0, negative tolerances or tau_max < 1.
  void check() const;
};

struct AdmmIteration {
  int iteration = 0;          // 1-based
  int objective = 0;          // max c^f of the w-iterate
  double lagrangian = 0.0;    // at (w, y_new, lambda before the update)
  int residual = 0;           // sum |sum_t x - y p|
  int y_changes = 0;          // sum |y_new - y_old|
  double dual_norm = 0.0;     // Euclidean norm of lambda after the update
  double w_seconds = 0.0;
  double y_seconds = 0.0;
};

struct AdmmTrace {
  std::vector<AdmmIteration> iterations;

  std::string to_csv() const;
};

struct AdmmResult {
  Assignment assignment;
  std::vector<SlotTriple> fwd;
  std::vector<int> fwd_finish;      // per client
  std::vector<int> fwd_completion;  // per client
  int fwd_makespan = 0;
  AdmmTrace trace;
  bool converged = false;
  std::vector<double> lambda;  // final duals, per edge
};

/// max_j c^f_j + sum_e lambda_e r_e + (rho / 2) sum_e |r_e| with
/// r_e = sum_t x_e - y_e p_e. c^f_j counts l only on edges with y = 1 and
/// adds the helper's switching cost per fwd start.
double lagrangian_value(const ProblemInstance& instance,
                        std::span<const SlotTriple> fwd, std::span<const int> y,
                        std::span<const double> lambda, double rho);

/// Alternates the schedule and assignment subproblems with dual updates,
/// then re-solves the schedule with the final assignment held fixed.
AdmmResult run_admm(const ProblemInstance& instance,
                    const AdmmConfig& config = {});

/// run_admm followed by the block bwd scheduler on every helper.
SolveOutcome admm_plus_bwd(const ProblemInstance& instance,
                           const AdmmConfig& config = {},
                           const BwdOptions& bwd = {});

}  // namespace pslsched
