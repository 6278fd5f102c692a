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

#include <string>
#include <string_view>

#include "pslsched/instance.hpp"

namespace pslsched {

/// Instance document:
///   {"clients": [...], "helpers": [...],
///    "edges": [{"client", "helper", "r", "r_prime", "p", "p_prime", "l",
///               "l_prime", "link_delay_per_byte"}],
///    "memory_demand": [...], "memory_capacity": [...],
///    "slot_length_ms": x, "switching_cost": [...], "horizon": T}
/// `horizon` is written for readers and checked on load.
std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(std::string_view text);

struct OutcomeJsonOptions {
  bool include_wall_clock = false;
  int indent = 2;
};

/// Outcome document keyed by ids. Per-client rows carry the tail r' so the
/// document can be rendered without the instance.
std::string outcome_to_json(const ProblemInstance& instance,
                            const SolveOutcome& outcome,
                            const OutcomeJsonOptions& options = {});

/// Reads assignment and schedule back and recomputes completion times.
SolveOutcome outcome_from_json(const ProblemInstance& instance,
                               std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace pslsched
