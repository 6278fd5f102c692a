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
#include <string_view>
#include <vector>

#include "pslsched/admm.hpp"
#include "pslsched/exact.hpp"
#include "pslsched/ilp_solver.hpp"
#include "pslsched/instance.hpp"

namespace pslsched {

enum class Method { exact, ilp, admm, balanced_greedy, baseline };

const char* to_string(Method method);
Method parse_method(std::string_view name);
const std::vector<Method>& all_methods();

struct MethodOptions {
  std::uint64_t seed = 0;  // baseline only
  AdmmConfig admm;
  BwdOptions bwd;
  ExactConfig exact;
  SolverConfig ilp;
};

SolveOutcome run_method(Method method, const ProblemInstance& instance,
                        const MethodOptions& options = {});

struct StrategyThresholds {
  int large_clients = 70;
  /// Instances whose timing_cv falls below this count as low heterogeneity.
  double low_heterogeneity_cv = 0.35;
};

/// balanced-greedy for large or low-heterogeneity instances, admm otherwise.
Method recommend_method(const ProblemInstance& instance,
                        const StrategyThresholds& thresholds = {});

}  // namespace pslsched
