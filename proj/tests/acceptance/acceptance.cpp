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

// One PASS/FAIL line per acceptance criterion. Tolerances and sample sizes
// are fixed below; --only picks a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include "CLI11.hpp"
#include "fixtures.hpp"
#include "mutants.hpp"
#include "pslsched/bwd_scheduler.hpp"
#include "pslsched/heuristics.hpp"
#include "pslsched/ilp_builder.hpp"
#include "pslsched/io.hpp"
#include "pslsched/methods.hpp"
#include "pslsched/scenario.hpp"
#include "pslsched/validator.hpp"

using namespace pslsched;

namespace {

constexpr int kOracleInstances = 200;
constexpr int kOracleMaxHorizon = 40;
constexpr double kOracleTimeBudgetSec = 600.0;
constexpr int kBwdInstances = 200;
constexpr int kBwdHorizon = 20;
constexpr double kAdmmGapTolerance = 0.15;
constexpr double kAdmmSeedShare = 0.90;
constexpr int kAdmmMaxIterations = 10;
constexpr int kSeeds = 20;
constexpr double kSlotSeedShare = 0.90;
constexpr int kSweepClients = 100;
constexpr int kSweepSeeds = 10;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

ScenarioSpec spec(int scenario, NnModel m, int J, int I, std::uint64_t seed,
                  double slot = 0.0) {
  ScenarioSpec s;
  s.scenario = scenario;
  s.model = m;
  s.num_clients = J;
  s.num_helpers = I;
  s.seed = seed;
  s.slot_length_ms = slot;
  return s;
}

// Runs shared by criteria 4 and 5.
class RunCache {
 public:
  const SolveOutcome& get(const ScenarioSpec& s, Method m) {
    const Key key{s.scenario, static_cast<int>(s.model), s.num_clients,
                  s.num_helpers, s.seed, static_cast<int>(m)};
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    const ProblemInstance in = generate(s);
    MethodOptions o;
    o.seed = s.seed;
    return runs_.emplace(key, run_method(m, in, o)).first->second;
  }

 private:
  using Key = std::tuple<int, int, int, int, std::uint64_t, int>;
  std::map<Key, SolveOutcome> runs_;
};

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  int checked = 0, equal = 0;
  std::map<int, int> per_kind;
  std::string first_miss;
  for (std::uint64_t seed = 1; checked < kOracleInstances; ++seed) {
    const int kind = static_cast<int>(seed % 3);
    const ProblemInstance in = testing::random_toy(seed, kind, kOracleMaxHorizon);
    if (in.horizon() > kOracleMaxHorizon) continue;
    const int oracle = brute_force_optimum(in).makespan;
    const BuiltModel b = build_full(in);
    SolverConfig cfg;
    cfg.time_limit_sec = 0;
    const SolverResult r = solve(b.model, cfg);
    bool ok = r.status == SolveStatus::optimal && std::lround(r.objective) == oracle;
    if (ok) {
      Assignment a;
      Schedule s;
      decode(in, b, r.values, a, s);
      ok = validate(in, a, s).empty() &&
           completion_from_schedule(in, a, s).makespan == oracle;
    }
    ++checked;
    ++per_kind[kind];
    equal += ok;
    if (!ok && first_miss.empty()) first_miss = " first miss: seed " + std::to_string(seed);
  }
  const double secs = since(start);
  std::ostringstream d;
  d << equal << "/" << checked << " equal (unit-task " << per_kind[0] << ", catalog "
    << per_kind[1] << ", free-form " << per_kind[2] << "), " << fmt("%.1f", secs)
    << " s" << first_miss;
  return {equal == checked && secs < kOracleTimeBudgetSec, d.str()};
}

Verdict bwd_optimality() {
  std::mt19937 rng(2026);
  int checked = 0, equal = 0, largest = 0;
  while (checked < kBwdInstances) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<BwdTask> tasks;
    for (int k = 0; k < n; ++k) {
      tasks.push_back({k + 1, static_cast<int>(rng() % 10),
                       1 + static_cast<int>(rng() % 3), static_cast<int>(rng() % 7)});
    }
    std::vector<int> eligible;
    for (int t = 0; t < kBwdHorizon; ++t) {
      if (rng() % 4 != 0) eligible.push_back(t);  // the rest hold fwd units
    }
    const int oracle = testing::BwdOracle(tasks, eligible).solve();
    if (oracle == INT_MAX) continue;
    const HelperBwdSchedule s = schedule_bwd_on_helper(tasks, eligible);
    ++checked;
    equal += s.max_cost == oracle;
    largest = std::max(largest, n);
  }
  return {equal == checked, std::to_string(equal) + "/" + std::to_string(checked) +
                                " equal, up to " + std::to_string(largest) +
                                " tasks, horizon " + std::to_string(kBwdHorizon)};
}

Verdict block_example() {
  const testing::BlockExample ex = testing::block_example();
  const HelperBwdSchedule s = schedule_bwd_on_helper(ex.tasks, ex.eligible);
  auto labels = [&](const Block& b) {
    std::vector<int> out;
    for (int k : b.members) out.push_back(ex.tasks[static_cast<size_t>(k)].label);
    return out;
  };
  std::vector<const Block*> top;
  const Block* sub23 = nullptr;
  for (const Block& b : s.blocks) {
    if (b.depth == 0) top.push_back(&b);
    if (b.depth == 1 && labels(b) == std::vector<int>{2, 3}) sub23 = &b;
  }
  int last = -1, worst = INT_MIN;
  for (size_t k = 0; k < ex.tasks.size(); ++k) {
    const int cost = s.finish[k] + ex.tasks[k].tail;
    if (cost > worst) {
      worst = cost;
      last = ex.tasks[k].label;
    }
  }
  const bool ok =
      top.size() == 2 && labels(*top[0]) == std::vector<int>{1, 4, 2, 3} &&
      labels(*top[1]) == std::vector<int>{5} && top[0]->start == 0 &&
      top[0]->end == 8 && top[1]->start == 9 && top[1]->end == 10 &&
      ex.tasks[static_cast<size_t>(top[0]->chosen)].label == 4 && sub23 != nullptr &&
      sub23->end == 7 && ex.tasks[static_cast<size_t>(sub23->chosen)].label == 2 &&
      s.max_cost == 14 && last == 3;
  return {ok, "makespan " + std::to_string(s.max_cost) + ", last client " +
                  std::to_string(last) + ", moved into gaps 4 then 2: " +
                  (ok ? "yes" : "no")};
}

Verdict admm_quality(RunCache& cache) {
  const std::vector<std::pair<int, int>> sizes = {{10, 2}, {10, 5}, {15, 5}};
  bool ok = true;
  std::ostringstream d;
  double worst_gap = 0.0;
  int runs = 0, clean = 0, too_long = 0;
  for (int sc : {1, 2}) {
    for (auto [J, I] : sizes) {
      int within = 0;
      for (int seed = 0; seed < kSeeds; ++seed) {
        const ScenarioSpec s = spec(sc, NnModel::resnet101, J, I, static_cast<std::uint64_t>(seed));
        const SolveOutcome& ex = cache.get(s, Method::exact);
        const SolveOutcome& ad = cache.get(s, Method::admm);
        const ProblemInstance in = generate(s);
        ++runs;
        clean += validate(in, ad.assignment, ad.schedule).empty();
        too_long += ad.stats.iterations > kAdmmMaxIterations;
        if (!ex.stats.optimal) ok = false;
        const double gap = static_cast<double>(ad.makespan - ex.makespan) / ex.makespan;
        worst_gap = std::max(worst_gap, gap);
        within += gap <= kAdmmGapTolerance + 1e-12;
      }
      const double share = static_cast<double>(within) / kSeeds;
      if (share < kAdmmSeedShare) ok = false;
      d << "S" << sc << "(" << J << "," << I << ") " << within << "/" << kSeeds << "; ";
    }
  }
  ok = ok && clean == runs && too_long == 0;
  d << "worst gap " << fmt("%.3f", worst_gap) << ", clean " << clean << "/" << runs
    << ", over " << kAdmmMaxIterations << " iterations: " << too_long;
  return {ok, d.str()};
}

Verdict strategy_dominance(RunCache& cache) {
  const std::vector<std::pair<int, int>> sizes = {{10, 2}, {15, 5}, {100, 10}};
  bool ok = true;
  double max_gain = 0.0, max_mean_gain = 0.0;
  int configs = 0;
  std::ostringstream d;
  for (int sc : {1, 2}) {
    for (NnModel m : {NnModel::resnet101, NnModel::vgg19}) {
      for (auto [J, I] : sizes) {
        double rec_sum = 0, base_sum = 0;
        std::set<std::string> used;
        for (int seed = 0; seed < kSeeds; ++seed) {
          const ScenarioSpec s = spec(sc, m, J, I, static_cast<std::uint64_t>(seed));
          const Method rec = recommend_method(generate(s));
          used.insert(to_string(rec));
          const int a = cache.get(s, rec).makespan;
          const int b = cache.get(s, Method::baseline).makespan;
          rec_sum += a;
          base_sum += b;
          max_gain = std::max(max_gain, static_cast<double>(b - a) / b);
        }
        ++configs;
        const double gain = (base_sum - rec_sum) / base_sum;
        max_mean_gain = std::max(max_mean_gain, gain);
        if (rec_sum > base_sum) {
          ok = false;
          d << "S" << sc << " " << to_string(m) << " (" << J << "," << I
            << ") recommended mean above baseline; ";
        }
      }
    }
  }
  d << configs << " configurations x " << kSeeds << " seeds, max gain "
    << fmt("%.1f%%", 100 * max_gain) << ", max mean gain "
    << fmt("%.1f%%", 100 * max_mean_gain);
  return {ok, d.str()};
}

Verdict slot_monotonicity() {
  int seeds = 0, good = 0;
  for (int sc : {1, 2}) {
    for (int seed = 0; seed < kSeeds; ++seed) {
      double ms[3];
      const double slots[3] = {200.0, 150.0, 50.0};
      for (int k = 0; k < 3; ++k) {
        const ProblemInstance in = generate(
            spec(sc, NnModel::resnet101, 6, 2, static_cast<std::uint64_t>(seed), slots[k]));
        ms[k] = solve_exact(in).makespan * slots[k];
      }
      ++seeds;
      good += ms[0] + slots[0] >= ms[1] && ms[1] + slots[1] >= ms[2];
    }
  }
  const double share = static_cast<double>(good) / seeds;
  return {share >= kSlotSeedShare,
          std::to_string(good) + "/" + std::to_string(seeds) +
              " seeds ordered (exact, J=6, I=2, one-slot slack)"};
}

Verdict helper_sweep() {
  int monotone = 0, diminishing = 0;
  std::ostringstream d;
  for (int seed = 0; seed < kSweepSeeds; ++seed) {
    std::vector<int> ms;
    for (int I = 1; I <= 10; ++I) {
      ms.push_back(balanced_greedy(generate(spec(1, NnModel::resnet101, kSweepClients, I,
                                                 static_cast<std::uint64_t>(seed))))
                       .makespan);
    }
    bool mono = true;
    for (size_t k = 1; k < ms.size(); ++k) mono = mono && ms[k] <= ms[k - 1];
    monotone += mono;
    diminishing += (ms[0] - ms[1]) > (ms[8] - ms[9]);
    if (seed == 0) {
      d << "seed 0:";
      for (int v : ms) d << " " << v;
      d << "; ";
    }
  }
  d << "non-increasing " << monotone << "/" << kSweepSeeds << ", diminishing "
    << diminishing << "/" << kSweepSeeds;
  return {monotone == kSweepSeeds && diminishing == kSweepSeeds, d.str()};
}

Verdict mutation_suite() {
  const auto mutants = testing::validator_mutants();
  int caught = 0, twins = 0;
  std::set<std::string> families;
  for (const auto& m : mutants) {
    std::set<std::string> tags;
    for (const Violation& v : validate(m.instance, m.assignment, m.schedule)) {
      tags.insert(v.tag);
    }
    caught += tags == std::set<std::string>{m.tag};
    twins += validate(m.instance, m.twin_assignment, m.twin_schedule).empty();
    families.insert(m.tag);
  }
  const int n = static_cast<int>(mutants.size());
  return {n == 20 && caught == n && twins == n,
          std::to_string(caught) + "/" + std::to_string(n) + " tagged correctly, " +
              std::to_string(twins) + "/" + std::to_string(n) + " twins clean, " +
              std::to_string(families.size()) + " tags"};
}

Verdict determinism() {
  int same = 0, total = 0;
  std::string diff;
  auto twice = [&](const ProblemInstance& in, Method m, std::uint64_t seed) {
    MethodOptions o;
    o.seed = seed;
    const std::string a = outcome_to_json(in, run_method(m, in, o));
    const std::string b = outcome_to_json(in, run_method(m, in, o));
    ++total;
    if (a == b) {
      ++same;
    } else if (diff.empty()) {
      diff = std::string(", differs: ") + to_string(m);
    }
  };
  const ProblemInstance toy = testing::random_toy(7, 1);
  for (Method m : all_methods()) twice(toy, m, 7);
  for (int sc : {1, 2}) {
    const ScenarioSpec s = spec(sc, NnModel::resnet101, 10, 2, 3);
    ++total;
    same += instance_to_json(generate(s)) == instance_to_json(generate(s));
    for (Method m : {Method::exact, Method::admm, Method::balanced_greedy, Method::baseline}) {
      twice(generate(s), m, 3);
    }
  }
  return {same == total, std::to_string(same) + "/" + std::to_string(total) +
                             " byte-identical reruns" + diff};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pslsched acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  RunCache cache;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"exact model equals enumeration on small instances", oracle_equivalence},
      {"block bwd schedule equals exhaustive search", bwd_optimality},
      {"worked block example", block_example},
      {"ADMM within tolerance of the exact optimum", [&] { return admm_quality(cache); }},
      {"recommended method beats the random baseline", [&] { return strategy_dominance(cache); }},
      {"makespan grows with slot length", slot_monotonicity},
      {"helper sweep is monotone with diminishing gains", helper_sweep},
      {"validator mutants", mutation_suite},
      {"deterministic reruns", determinism},
  };
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("criterion %d: %s  %s [%s] (%.1f s)\n", id, v.pass ? "PASS" : "FAIL",
                criteria[k].first, v.detail.c_str(), since(start));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
