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

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pslsched/io.hpp"

namespace pslsched {

using Json = nlohmann::ordered_json;

namespace {

template <typename T>
T field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string("missing field: ") + key);
  try {
    return it->get<T>();
  } catch (const Json::exception& e) {
    throw Error(std::string("bad field ") + key + ": " + e.what());
  }
}

const Json& member(const Json& obj, const char* key) {
  if (!obj.is_object()) throw Error(std::string("expected an object holding ") + key);
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(std::string("missing field: ") + key);
  return *it;
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

Json triples_to_json(const ProblemInstance& instance,
                     const std::vector<SlotTriple>& triples) {
  Json out = Json::array();
  for (const SlotTriple& t : triples) {
    out.push_back({instance.helper_ids()[static_cast<size_t>(t.helper)],
                   instance.client_ids()[static_cast<size_t>(t.client)],
                   t.slot});
  }
  return out;
}

std::vector<SlotTriple> triples_from_json(const ProblemInstance& instance,
                                          const Json& arr) {
  std::vector<SlotTriple> out;
  if (!arr.is_array()) throw Error("schedule entries must be arrays");
  for (const Json& t : arr) {
    if (!t.is_array() || t.size() != 3) {
      throw Error("schedule triple must be [helper, client, slot]");
    }
    SlotTriple s;
    s.helper = instance.helper_index(t[0].get<int>());
    s.client = instance.client_index(t[1].get<int>());
    s.slot = t[2].get<int>();
    if (s.helper < 0 || s.client < 0) {
      throw Error("schedule references unknown node");
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::string instance_to_json(const ProblemInstance& instance) {
  Json doc;
  doc["clients"] = instance.client_ids();
  doc["helpers"] = instance.helper_ids();
  Json edges = Json::array();
  for (const EdgeTiming& e : instance.edges()) {
    edges.push_back({{"client", e.client},
                     {"helper", e.helper},
                     {"r", e.r},
                     {"r_prime", e.r_prime},
                     {"p", e.p},
                     {"p_prime", e.p_prime},
                     {"l", e.l},
                     {"l_prime", e.l_prime},
                     {"link_delay_per_byte", e.link_delay_per_byte}});
  }
  doc["edges"] = std::move(edges);
  doc["memory_demand"] = instance.memory_demand();
  doc["memory_capacity"] = instance.memory_capacity();
  doc["slot_length_ms"] = instance.slot_length_ms();
  doc["switching_cost"] = instance.switching_cost();
  doc["horizon"] = instance.horizon();
  return doc.dump(2) + "\n";
}

ProblemInstance instance_from_json(std::string_view text) {
  const Json doc = parse_document(text);
  if (!doc.is_object()) throw Error("instance document must be an object");
  std::vector<EdgeTiming> edges;
  const Json& arr = member(doc, "edges");
  if (!arr.is_array()) throw Error("edges must be an array");
  for (const Json& e : arr) {
    EdgeTiming t;
    t.client = field<int>(e, "client");
    t.helper = field<int>(e, "helper");
    t.r = field<int>(e, "r");
    t.r_prime = field<int>(e, "r_prime");
    t.p = field<int>(e, "p");
    t.p_prime = field<int>(e, "p_prime");
    t.l = field<int>(e, "l");
    t.l_prime = field<int>(e, "l_prime");
    if (e.contains("link_delay_per_byte")) {
      t.link_delay_per_byte = field<double>(e, "link_delay_per_byte");
    }
    edges.push_back(t);
  }
  std::vector<int> switching;
  if (doc.contains("switching_cost")) {
    switching = field<std::vector<int>>(doc, "switching_cost");
  }
  ProblemInstance instance(field<std::vector<int>>(doc, "clients"),
                           field<std::vector<int>>(doc, "helpers"),
                           std::move(edges),
                           field<std::vector<double>>(doc, "memory_demand"),
                           field<std::vector<double>>(doc, "memory_capacity"),
                           field<double>(doc, "slot_length_ms"),
                           std::move(switching));
  if (doc.contains("horizon") &&
      field<int>(doc, "horizon") != instance.horizon()) {
    throw Error("horizon does not match the edge timings");
  }
  return instance;
}

std::string outcome_to_json(const ProblemInstance& instance,
                            const SolveOutcome& outcome,
                            const OutcomeJsonOptions& options) {
  Json doc;
  doc["makespan"] = outcome.makespan;
  doc["horizon"] = instance.horizon();
  doc["slot_length_ms"] = instance.slot_length_ms();
  doc["helpers"] = instance.helper_ids();
  const int straggler = outcome.straggler();
  doc["straggler"] =
      straggler < 0 ? Json(nullptr)
                    : Json(instance.client_ids()[static_cast<size_t>(straggler)]);
  Json clients = Json::array();
  for (int j = 0; j < instance.num_clients(); ++j) {
    const size_t js = static_cast<size_t>(j);
    const int h = outcome.assignment.helper_of[js];
    Json row;
    row["client"] = instance.client_ids()[js];
    row["helper"] = h < 0 ? Json(nullptr)
                          : Json(instance.helper_ids()[static_cast<size_t>(h)]);
    row["fwd_finish"] = outcome.fwd_finish[js];
    row["fwd_completion"] = outcome.fwd_completion[js];
    row["bwd_finish"] = outcome.bwd_finish[js];
    row["completion"] = outcome.completion[js];
    row["tail"] = h < 0 ? 0 : instance.timing(j, h).r_prime;
    clients.push_back(std::move(row));
  }
  doc["clients"] = std::move(clients);
  Schedule sorted = outcome.schedule;
  sorted.normalize();
  doc["schedule"] = {{"fwd", triples_to_json(instance, sorted.fwd)},
                     {"bwd", triples_to_json(instance, sorted.bwd)}};
  Json stats;
  stats["solver"] = outcome.stats.solver;
  stats["iterations"] = outcome.stats.iterations;
  stats["optimal"] = outcome.stats.optimal;
  stats["converged"] = outcome.stats.converged;
  stats["lower_bound"] = outcome.stats.lower_bound
                             ? Json(*outcome.stats.lower_bound)
                             : Json(nullptr);
  if (!outcome.stats.notes.empty()) stats["notes"] = outcome.stats.notes;
  if (options.include_wall_clock) {
    stats["wall_seconds"] = outcome.stats.wall_seconds;
  }
  doc["stats"] = std::move(stats);
  return doc.dump(options.indent) + "\n";
}

SolveOutcome outcome_from_json(const ProblemInstance& instance,
                               std::string_view text) {
  const Json doc = parse_document(text);
  Assignment assignment = Assignment::unassigned(instance.num_clients());
  for (const Json& row : member(doc, "clients")) {
    const int c = instance.client_index(field<int>(row, "client"));
    if (c < 0) throw Error("outcome references unknown client");
    if (!member(row, "helper").is_null()) {
      const int h = instance.helper_index(field<int>(row, "helper"));
      if (h < 0) throw Error("outcome references unknown helper");
      assignment.helper_of[static_cast<size_t>(c)] = h;
    }
  }
  Schedule schedule;
  schedule.fwd = triples_from_json(instance, member(member(doc, "schedule"), "fwd"));
  schedule.bwd = triples_from_json(instance, member(member(doc, "schedule"), "bwd"));
  SolveOutcome out = completion_from_schedule(instance, assignment, schedule);
  if (doc.contains("stats")) {
    const Json& s = doc["stats"];
    out.stats.solver = s.value("solver", "");
    out.stats.iterations = s.value("iterations", 0);
    out.stats.optimal = s.value("optimal", false);
    out.stats.converged = s.value("converged", true);
    if (s.contains("lower_bound") && !s["lower_bound"].is_null()) {
      out.stats.lower_bound = s["lower_bound"].get<double>();
    }
    out.stats.notes = s.value("notes", "");
    out.stats.wall_seconds = s.value("wall_seconds", 0.0);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace pslsched
