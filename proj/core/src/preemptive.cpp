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

#include "preemptive.hpp"

#include <algorithm>

namespace pslsched::detail {

int largest_tail_first(std::span<const PreemptiveJob> jobs,
                       std::span<const char> available,
                       std::vector<std::vector<int>>* slots) {
  const int n = static_cast<int>(jobs.size());
  std::vector<int> left(static_cast<size_t>(n));
  int pending = 0;
  int first_release = INT_MAX;
  for (int k = 0; k < n; ++k) {
    left[static_cast<size_t>(k)] = jobs[static_cast<size_t>(k)].work;
    if (left[static_cast<size_t>(k)] > 0) {
      ++pending;
      first_release = std::min(first_release, jobs[static_cast<size_t>(k)].release);
    }
  }
  if (slots) slots->assign(static_cast<size_t>(n), {});
  int best = INT_MIN;
  const int horizon = static_cast<int>(available.size());
  for (int t = std::max(first_release, 0); t < horizon && pending > 0; ++t) {
    if (!available[static_cast<size_t>(t)]) continue;
    int pick = -1;
    for (int k = 0; k < n; ++k) {
      const PreemptiveJob& j = jobs[static_cast<size_t>(k)];
      if (left[static_cast<size_t>(k)] == 0 || j.release > t) continue;
      if (pick < 0) {
        pick = k;
        continue;
      }
      const PreemptiveJob& b = jobs[static_cast<size_t>(pick)];
      if (j.tail > b.tail || (j.tail == b.tail && j.release < b.release)) {
        pick = k;
      }
    }
    if (pick < 0) continue;
    if (slots) (*slots)[static_cast<size_t>(pick)].push_back(t);
    if (--left[static_cast<size_t>(pick)] == 0) {
      --pending;
      best = std::max(best, t + 1 + jobs[static_cast<size_t>(pick)].tail);
    }
  }
  return pending > 0 ? kNoFit : best;
}

int largest_tail_first_from(std::span<const PreemptiveJob> jobs, int start) {
  const size_t n = jobs.size();
  std::vector<int> left(n);
  int pending = 0;
  for (size_t k = 0; k < n; ++k) {
    left[k] = jobs[k].work;
    if (left[k] > 0) ++pending;
  }
  int best = INT_MIN;
  int t = start;
  while (pending > 0) {
    int pick = -1;
    int next_release = INT_MAX;
    for (size_t k = 0; k < n; ++k) {
      if (left[k] == 0) continue;
      const PreemptiveJob& j = jobs[k];
      if (j.release > t) {
        next_release = std::min(next_release, j.release);
        continue;
      }
      if (pick < 0 || j.tail > jobs[static_cast<size_t>(pick)].tail) {
        pick = static_cast<int>(k);
      }
    }
    if (pick < 0) {
      t = next_release;
      continue;
    }
    const size_t ps = static_cast<size_t>(pick);
    const int run =
        next_release == INT_MAX ? left[ps] : std::min(left[ps], next_release - t);
    t += run;
    left[ps] -= run;
    if (left[ps] == 0) {
      --pending;
      best = std::max(best, t + jobs[ps].tail);
    }
  }
  return best;
}

}  // namespace pslsched::detail
