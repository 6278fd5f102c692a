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

#include "pslsched/validator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pslsched {

namespace {

void add(std::vector<Violation>& out, const char* tag, std::string message,
         int helper = -1, int client = -1, int slot = -1) {
  out.push_back(Violation{tag, std::move(message), helper, client, slot});
}

std::string where(int helper, int client, int slot) {
  std::ostringstream ss;
  ss << "(helper " << helper << ", client " << client << ", slot " << slot
     << ")";
  return ss.str();
}

}  // namespace

std::vector<Violation> validate(const ProblemInstance& instance,
                                const Assignment& assignment,
                                const Schedule& schedule) {
  std::vector<Violation> out;
  const int J = instance.num_clients();
  const int I = instance.num_helpers();
  const int T = instance.horizon();

  // Assignment: totality, edges, memory.
  std::vector<int> helper_of(static_cast<size_t>(J), -1);
  if (static_cast<int>(assignment.helper_of.size()) != J) {
    add(out, "assignment", "assignment does not cover every client exactly once");
  }
  for (int j = 0; j < J && j < static_cast<int>(assignment.helper_of.size());
       ++j) {
    const int h = assignment.helper_of[static_cast<size_t>(j)];
    if (h < 0) {
      add(out, "assignment", "client is not assigned", -1, j);
    } else if (h >= I) {
      add(out, "index", "assignment names an unknown helper", h, j);
    } else if (!instance.connected(j, h)) {
      add(out, "edge", "client assigned over a non-edge", h, j);
    } else {
      helper_of[static_cast<size_t>(j)] = h;
    }
  }
  std::vector<double> load(static_cast<size_t>(I), 0.0);
  for (int j = 0; j < J; ++j) {
    const int h = helper_of[static_cast<size_t>(j)];
    if (h >= 0) {
      load[static_cast<size_t>(h)] +=
          instance.memory_demand()[static_cast<size_t>(j)];
    }
  }
  for (int i = 0; i < I; ++i) {
    if (load[static_cast<size_t>(i)] >
        instance.memory_capacity()[static_cast<size_t>(i)] + 1e-9) {
      add(out, "memory", "helper memory exceeded", i);
    }
  }

  // Triples: indices, horizon, duplicates, stray helpers.
  auto screen = [&](const std::vector<SlotTriple>& triples, const char* kind,
                    std::vector<SlotTriple>& kept) {
    std::set<SlotTriple> seen;
    for (const SlotTriple& t : triples) {
      if (t.helper < 0 || t.helper >= I || t.client < 0 || t.client >= J) {
        add(out, "index", std::string(kind) + " triple with unknown node",
            t.helper, t.client, t.slot);
        continue;
      }
      if (t.slot < 0 || t.slot >= T) {
        add(out, "horizon",
            std::string(kind) + " slot outside the horizon " +
                where(t.helper, t.client, t.slot),
            t.helper, t.client, t.slot);
        continue;
      }
      if (!seen.insert(t).second) {
        add(out, "duplicate",
            std::string(kind) + " triple listed twice " +
                where(t.helper, t.client, t.slot),
            t.helper, t.client, t.slot);
        continue;
      }
      if (helper_of[static_cast<size_t>(t.client)] != t.helper) {
        add(out, "assigned_edge",
            std::string(kind) + " triple on a helper the client is not "
                                "assigned to " +
                where(t.helper, t.client, t.slot),
            t.helper, t.client, t.slot);
        continue;
      }
      kept.push_back(t);
    }
  };
  std::vector<SlotTriple> fwd;
  std::vector<SlotTriple> bwd;
  screen(schedule.fwd, "fwd", fwd);
  screen(schedule.bwd, "bwd", bwd);

  // Unit capacity per helper-slot.
  std::map<std::pair<int, int>, int> occupancy;
  for (const SlotTriple& t : fwd) ++occupancy[{t.helper, t.slot}];
  for (const SlotTriple& t : bwd) ++occupancy[{t.helper, t.slot}];
  for (const auto& [key, count] : occupancy) {
    if (count > 1) {
      add(out, "capacity",
          "helper " + std::to_string(key.first) + " runs " +
              std::to_string(count) + " tasks in slot " +
              std::to_string(key.second),
          key.first, -1, key.second);
    }
  }

  // Per-client release, precedence, and quotas.
  std::vector<std::vector<int>> fwd_slots(static_cast<size_t>(J));
  std::vector<std::vector<int>> bwd_slots(static_cast<size_t>(J));
  for (const SlotTriple& t : fwd) {
    fwd_slots[static_cast<size_t>(t.client)].push_back(t.slot);
  }
  for (const SlotTriple& t : bwd) {
    bwd_slots[static_cast<size_t>(t.client)].push_back(t.slot);
  }
  bool complete = out.empty();
  for (int j = 0; j < J; ++j) {
    const size_t js = static_cast<size_t>(j);
    const int h = helper_of[js];
    if (h < 0) {
      complete = false;
      continue;
    }
    const EdgeTiming& e = instance.timing(j, h);
    auto& fs = fwd_slots[js];
    auto& bs = bwd_slots[js];
    std::sort(fs.begin(), fs.end());
    std::sort(bs.begin(), bs.end());
    for (int t : fs) {
      if (t < e.r) {
        add(out, "release", "fwd slot before release " + where(h, j, t), h, j, t);
      }
    }
    for (int s : bs) {
      const int cutoff = s - e.l - e.l_prime;
      const auto done = std::lower_bound(fs.begin(), fs.end(), cutoff) -
                        fs.begin();
      if (done < e.p) {
        add(out, "precedence",
            "bwd slot before fwd completion plus l + l' " + where(h, j, s), h,
            j, s);
      }
    }
    if (static_cast<int>(fs.size()) != e.p) {
      add(out, "fwd_quota",
          "fwd slots " + std::to_string(fs.size()) + " != p " +
              std::to_string(e.p),
          h, j);
      complete = false;
    }
    if (static_cast<int>(bs.size()) != e.p_prime) {
      add(out, "bwd_quota",
          "bwd slots " + std::to_string(bs.size()) + " != p' " +
              std::to_string(e.p_prime),
          h, j);
      complete = false;
    }
  }

  // Completion within the horizon (the switching-cost extension may exceed T
  // by design, so only the base model is checked).
  if (complete && !instance.has_switching_cost()) {
    const SolveOutcome o = completion_from_schedule(
        instance, Assignment{helper_of}, Schedule{fwd, bwd});
    for (int j = 0; j < J; ++j) {
      if (o.completion[static_cast<size_t>(j)] > T) {
        add(out, "late_completion", "completion after the horizon", helper_of[j], j);
      }
    }
  }
  return out;
}

std::string violations_to_jsonl(const ProblemInstance& instance,
                                const std::vector<Violation>& violations) {
  std::string out;
  for (const Violation& v : violations) {
    nlohmann::ordered_json row;
    row["tag"] = v.tag;
    row["message"] = v.message;
    auto id_or_null = [](const std::vector<int>& ids, int idx) {
      return idx >= 0 && idx < static_cast<int>(ids.size())
                 ? nlohmann::ordered_json(ids[static_cast<size_t>(idx)])
                 : nlohmann::ordered_json(nullptr);
    };
    row["helper"] = id_or_null(instance.helper_ids(), v.helper);
    row["client"] = id_or_null(instance.client_ids(), v.client);
    row["slot"] = v.slot < 0 ? nlohmann::ordered_json(nullptr)
                             : nlohmann::ordered_json(v.slot);
    out += row.dump();
    out += '\n';
  }
  return out;
}

void ensure_valid(const ProblemInstance& instance, const Assignment& assignment,
                  const Schedule& schedule, const char* producer) {
  const auto violations = validate(instance, assignment, schedule);
  if (violations.empty()) return;
  std::string msg = std::string(producer) + " produced an invalid schedule:";
  for (size_t k = 0; k < violations.size() && k < 5; ++k) {
    msg += " [" + violations[k].tag + "] " + violations[k].message + ";";
  }
  throw InternalError(msg);
}

}  // namespace pslsched
