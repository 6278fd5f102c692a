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

#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "pslsched/admm.hpp"
#include "pslsched/validator.hpp"

using namespace pslsched;
using testing::make_instance;

TEST_CASE("lagrangian adds the weighted residual") {
  const ProblemInstance in = make_instance(1, 1, {{1, 1, 0, 2, 1, 0, 1, 0}});
  const std::vector<SlotTriple> fwd = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}};
  const std::vector<int> y = {1};
  const std::vector<double> lambda = {1.0};
  // max c^f = 3 + l = 4; residual 3 - 2 = 1 -> 1 * 1 + 2 / 2 * 1.
  CHECK(lagrangian_value(in, fwd, y, lambda, 2.0) == doctest::Approx(4 + 2));
  const std::vector<int> none = {0};
  // Unassigned: no l, residual 3.
  CHECK(lagrangian_value(in, fwd, none, lambda, 2.0) == doctest::Approx(3 + 3 + 3));
}

TEST_CASE("one client converges within three iterations") {
  // y starts at zero, so iteration 1 always flips y. Its c^f carries no l,
  // so with l > 0 the objective moves once more before both tests pass.
  const ProblemInstance in = make_instance(1, 1, {{1, 1, 2, 3, 1, 1, 2, 1}});
  const AdmmResult r = run_admm(in);
  CHECK(r.converged);
  CHECK(r.trace.iterations.size() == 3);
  CHECK(r.trace.iterations.back().residual == 0);
  CHECK(r.assignment == Assignment{{0}});
  CHECK(r.fwd_finish[0] == 2 + 3);
  CHECK(r.fwd_makespan == 2 + 3 + 1);

  const ProblemInstance no_l = make_instance(1, 1, {{1, 1, 2, 3, 0, 1, 2, 1}});
  const AdmmResult q = run_admm(no_l);
  CHECK(q.converged);
  CHECK(q.trace.iterations.size() == 2);
  CHECK(q.fwd_makespan == 2 + 3);
}

TEST_CASE("identical helpers split identical clients") {
  const ProblemInstance in = make_instance(
      2, 2, {{1, 1, 0, 3, 1, 0, 1, 0}, {1, 2, 0, 3, 1, 0, 1, 0},
             {2, 1, 0, 3, 1, 0, 1, 0}, {2, 2, 0, 3, 1, 0, 1, 0}});
  const AdmmResult r = run_admm(in);
  CHECK(r.assignment.helper_of[0] != r.assignment.helper_of[1]);
  CHECK(r.fwd_makespan == 3 + 1);
}

TEST_CASE("invariants on small instances") {
  for (std::uint64_t seed = 600; seed < 624; ++seed) {
    const ProblemInstance in = testing::random_toy(seed, static_cast<int>(seed));
    AdmmConfig cfg;
    cfg.mode = SubproblemMode::exact;
    cfg.limits = subproblem_limits(SubproblemMode::exact);
    const AdmmResult r = run_admm(in, cfg);
    CAPTURE(seed);
    // Every client on a connected helper within memory.
    std::vector<double> used(static_cast<size_t>(in.num_helpers()), 0.0);
    for (int j = 0; j < in.num_clients(); ++j) {
      const int i = r.assignment.helper_of[static_cast<size_t>(j)];
      REQUIRE(i >= 0);
      CHECK(in.connected(j, i));
      used[static_cast<size_t>(i)] += in.memory_demand()[static_cast<size_t>(j)];
    }
    for (int i = 0; i < in.num_helpers(); ++i) {
      CHECK(used[static_cast<size_t>(i)] <=
            in.memory_capacity()[static_cast<size_t>(i)] + 1e-9);
    }
    // Exactly p fwd units on the assigned helper, none past the fwd horizon.
    std::vector<int> units(static_cast<size_t>(in.num_clients()), 0);
    for (const SlotTriple& t : r.fwd) {
      CHECK(t.helper == r.assignment.helper_of[static_cast<size_t>(t.client)]);
      CHECK(t.slot < in.fwd_horizon());
      ++units[static_cast<size_t>(t.client)];
    }
    for (int j = 0; j < in.num_clients(); ++j) {
      CHECK(units[static_cast<size_t>(j)] ==
            in.timing(j, r.assignment.helper_of[static_cast<size_t>(j)]).p);
    }
    // The final fwd plan is optimal for its own assignment.
    int oracle = 0;
    std::vector<int> eligible;
    for (int t = 0; t < in.fwd_horizon(); ++t) eligible.push_back(t);
    for (int i = 0; i < in.num_helpers(); ++i) {
      std::vector<BwdTask> tasks;
      for (int j = 0; j < in.num_clients(); ++j) {
        if (r.assignment.helper_of[static_cast<size_t>(j)] != i) continue;
        const EdgeTiming& t = in.timing(j, i);
        tasks.push_back({j, t.r, t.p, t.l});
      }
      if (!tasks.empty()) {
        oracle = std::max(oracle, testing::BwdOracle(tasks, eligible).solve());
      }
    }
    CHECK(r.fwd_makespan == oracle);
    CHECK(static_cast<int>(r.trace.iterations.size()) <= cfg.tau_max);

    const SolveOutcome o = admm_plus_bwd(in, cfg);
    CHECK(validate(in, o.assignment, o.schedule).empty());
    CHECK(o.makespan >= brute_force_optimum(in).makespan);
  }
}

TEST_CASE("memory-infeasible instance names the iteration") {
  const ProblemInstance in = make_instance(
      2, 2, {{1, 1, 0, 1, 0, 0, 1, 0}, {1, 2, 0, 1, 0, 0, 1, 0},
             {2, 1, 0, 1, 0, 0, 1, 0}, {2, 2, 0, 1, 0, 0, 1, 0}},
      {3.0, 3.0}, {4.0, 2.0});
  try {
    run_admm(in);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("iteration 1") != std::string::npos);
  }
}

TEST_CASE("trace CSV and config checks") {
  const ProblemInstance in = generate_reduction_family(4, 2);
  const SolveOutcome o = admm_plus_bwd(in);
  CHECK(o.stats.solver == "admm+alg2");
  CHECK(o.makespan >= brute_force_optimum(in).makespan);
  const AdmmResult r = run_admm(in);
  const std::string csv = r.trace.to_csv();
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "iteration,objective,lagrangian,residual,y_changes,dual_norm,"
                  "w_seconds,y_seconds");
  CHECK(static_cast<size_t>(std::count(csv.begin(), csv.end(), '\n')) ==
        r.trace.iterations.size() + 1);

  AdmmConfig bad;
  bad.rho = 0;
  CHECK_THROWS_AS(run_admm(in, bad), Error);
  bad = AdmmConfig{};
  bad.tau_max = 0;
  CHECK_THROWS_AS(run_admm(in, bad), Error);
}
