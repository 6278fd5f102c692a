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

#include <climits>
#include <span>
#include <vector>

namespace pslsched::detail {

struct PreemptiveJob {
  int release = 0;
  int work = 0;
  int tail = 0;
};

inline constexpr int kNoFit = INT_MAX;

/// Preemptive single-machine schedule that always runs the released job with
/// the largest tail (ties: earlier release, then lower index) on the slots
/// where `available[t]` is nonzero. This minimizes max(C + tail). Returns
/// that maximum over jobs with work > 0 (INT_MIN if there are none), or
/// kNoFit when some work does not fit. Per-job slots go to `slots` if given.
int largest_tail_first(std::span<const PreemptiveJob> jobs,
                       std::span<const char> available,
                       std::vector<std::vector<int>>* slots = nullptr);

/// Same rule in continuous time with every slot from `start` on available;
/// event driven, so the cost does not depend on the length of the jobs.
int largest_tail_first_from(std::span<const PreemptiveJob> jobs, int start);

}  // namespace pslsched::detail
