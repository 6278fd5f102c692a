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

#include "gantt.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>
#include <vector>

namespace pslsched::cli {

namespace {

constexpr int kLeft = 70;
constexpr int kTop = 30;

std::string color(int client, bool bwd) {
  // Golden-angle hues keep neighbouring ids apart.
  const int hue = (client * 137) % 360;
  char buf[48];
  std::snprintf(buf, sizeof buf, "hsl(%d,%d%%,%d%%)", hue, bwd ? 45 : 65, bwd ? 38 : 62);
  return buf;
}

struct Run {
  int helper, client, start, end;
  bool bwd;
};

std::vector<Run> runs_of(std::vector<SlotTriple> triples, bool bwd) {
  std::sort(triples.begin(), triples.end(), [](const SlotTriple& a, const SlotTriple& b) {
    return std::tie(a.helper, a.slot, a.client) < std::tie(b.helper, b.slot, b.client);
  });
  std::vector<Run> out;
  for (const SlotTriple& t : triples) {
    if (!out.empty() && out.back().helper == t.helper && out.back().client == t.client &&
        out.back().end == t.slot) {
      ++out.back().end;
    } else {
      out.push_back({t.helper, t.client, t.slot, t.slot + 1, bwd});
    }
  }
  return out;
}

}  // namespace

std::string render_gantt(const ProblemInstance& in, const SolveOutcome& o,
                         const GanttStyle& style) {
  int span = std::max(o.makespan, 1);
  const int px = style.slot_px > 0
                     ? style.slot_px
                     : std::clamp((style.max_width_px - kLeft - 20) / span, 1, 40);
  const int rows = in.num_helpers();
  const int width = kLeft + span * px + 20;
  const int height = kTop + rows * style.row_px + 40;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\" font-family=\"monospace\" font-size=\"10\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << kLeft << "\" y=\"16\">makespan " << o.makespan << " slots ("
    << o.makespan * in.slot_length_ms() << " ms)</text>\n";
  for (int i = 0; i < rows; ++i) {
    const int y = kTop + i * style.row_px;
    s << "<text x=\"4\" y=\"" << y + style.row_px / 2 + 4 << "\">helper "
      << in.helper_ids()[static_cast<size_t>(i)] << "</text>\n";
    s << "<line x1=\"" << kLeft << "\" y1=\"" << y + style.row_px << "\" x2=\""
      << kLeft + span * px << "\" y2=\"" << y + style.row_px
      << "\" stroke=\"#ccc\"/>\n";
  }
  // Time axis, one tick per slot when there is room.
  const int axis_y = kTop + rows * style.row_px;
  const int step = std::max(1, 40 / px);
  for (int t = 0; t <= span; t += step) {
    const int x = kLeft + t * px;
    s << "<line x1=\"" << x << "\" y1=\"" << axis_y << "\" x2=\"" << x << "\" y2=\""
      << axis_y + 4 << "\" stroke=\"black\"/>";
    s << "<text x=\"" << x - 3 << "\" y=\"" << axis_y + 16 << "\">" << t << "</text>\n";
  }

  std::vector<Run> runs = runs_of(o.schedule.fwd, false);
  const std::vector<Run> b = runs_of(o.schedule.bwd, true);
  runs.insert(runs.end(), b.begin(), b.end());
  for (const Run& r : runs) {
    const int x = kLeft + r.start * px;
    const int y = kTop + r.helper * style.row_px + 3;
    const int w = (r.end - r.start) * px;
    const int id = in.client_ids()[static_cast<size_t>(r.client)];
    s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w << "\" height=\""
      << style.row_px - 6 << "\" fill=\"" << color(id, r.bwd)
      << "\" stroke=\"black\" stroke-width=\"0.5\"><title>client " << id
      << (r.bwd ? " bwd " : " fwd ") << r.start << "-" << r.end << "</title></rect>";
    if (w >= 14) {
      s << "<text x=\"" << x + 2 << "\" y=\"" << y + style.row_px / 2 + 1 << "\">"
        << (r.bwd ? "b" : "f") << id << "</text>";
    }
    s << "\n";
  }
  if (style.show_tails) {
    for (int j = 0; j < in.num_clients(); ++j) {
      const int i = o.assignment.helper_of.empty() ? -1
                                                   : o.assignment.helper_of[static_cast<size_t>(j)];
      if (i < 0 || o.bwd_finish.empty() || o.completion.empty()) continue;
      const int from = o.bwd_finish[static_cast<size_t>(j)];
      const int to = o.completion[static_cast<size_t>(j)];
      if (to <= from) continue;
      const int y = kTop + i * style.row_px + style.row_px - 2;
      s << "<line x1=\"" << kLeft + from * px << "\" y1=\"" << y << "\" x2=\""
        << kLeft + to * px << "\" y2=\"" << y << "\" stroke=\""
        << color(in.client_ids()[static_cast<size_t>(j)], true)
        << "\" stroke-width=\"2\"><title>client " << in.client_ids()[static_cast<size_t>(j)]
        << " tail to " << to << "</title></line>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace pslsched::cli
