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

#include "pslsched/instance.hpp"

namespace pslsched::cli {

struct GanttStyle {
  int slot_px = 0;  // 0 fits the chart into max_width_px
  int max_width_px = 1600;
  int row_px = 28;
  bool show_tails = true;
};

/// One row per helper; fwd and bwd runs as rectangles, client tails (r')
/// as thin lines after the last bwd unit. Layout depends only on the input.
std::string render_gantt(const ProblemInstance& instance,
                         const SolveOutcome& outcome,
                         const GanttStyle& style = {});

}  // namespace pslsched::cli
