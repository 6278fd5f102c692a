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

#include "pslsched/methods.hpp"

#include <string>

#include "pslsched/heuristics.hpp"
#include "pslsched/scenario.hpp"

namespace pslsched {

const char* to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::ilp: return "ilp";
    case Method::admm: return "admm";
    case Method::balanced_greedy: return "balanced-greedy";
    case Method::baseline: return "baseline";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : all_methods()) {
    if (name == to_string(m)) return m;
  }
  throw Error("unknown method '" + std::string(name) +
              "' (exact, ilp, admm, balanced-greedy, baseline)");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> all = {Method::exact, Method::ilp,
                                          Method::admm, Method::balanced_greedy,
                                          Method::baseline};
  return all;
}

SolveOutcome run_method(Method m, const ProblemInstance& in,
                        const MethodOptions& o) {
  switch (m) {
    case Method::exact: return solve_exact(in, o.exact);
    case Method::ilp: return solve_ilp(in, o.ilp);
    case Method::admm: return admm_plus_bwd(in, o.admm, o.bwd);
    case Method::balanced_greedy: return balanced_greedy(in);
    case Method::baseline: return baseline_random_fcfs(in, o.seed);
  }
  throw InternalError("unhandled method");
}

Method recommend_method(const ProblemInstance& in, const StrategyThresholds& t) {
  if (in.num_clients() >= t.large_clients) return Method::balanced_greedy;
  if (timing_cv(in) < t.low_heterogeneity_cv) return Method::balanced_greedy;
  return Method::admm;
}

}  // namespace pslsched
