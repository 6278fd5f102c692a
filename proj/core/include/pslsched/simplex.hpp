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

#include <vector>

#include "pslsched/ilp_model.hpp"

namespace pslsched {

/// min c'x  s.t.  rows,  lower <= x <= upper (all bounds finite).
struct LpProblem {
  int num_cols = 0;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<IlpConstraint> rows;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

struct LpOptions {
  double tolerance = 1e-7;
  int max_iterations = 0;  // 0 picks a size-based default
  int degenerate_before_bland = 50;
};

/// Bounded-variable primal revised simplex (dense basis inverse), two
/// phases with artificials, Dantzig pricing with a Bland fallback after a run
/// of degenerate pivots.
LpResult solve_lp(const LpProblem& problem, const LpOptions& options = {});

/// LP relaxation of a model (integrality dropped). Objective offset included.
LpResult solve_relaxation(const IlpModel& model, const LpOptions& options = {});

}  // namespace pslsched
