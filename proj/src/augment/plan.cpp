/* Copyright 2026 The sarcgen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "sarc/augment/plan.hpp"

#include <algorithm>

#include "sarc/common/error.hpp"
#include "sarc/common/utf8.hpp"

namespace sarc::augment {

void check_plan(const ReplacementPlan& plan) {
  const std::u32string text = utf8::decode(plan.original);
  const std::size_t n = plan.targets.size();
  if (plan.chosen.size() != n) throw data_error("plan: one choice per target required");
  if (!plan.proposals.empty() && plan.proposals.size() != n) {
    throw data_error("plan: one proposal list per target required");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Span& s = plan.targets[i];
    if (s.start >= s.end || s.end > text.size()) {
      throw data_error("plan: span out of bounds");
    }
    if (i > 0 && s.start < plan.targets[i - 1].end) {
      throw data_error(s.start < plan.targets[i - 1].start ? "plan: spans not sorted"
                                                           : "overlapping replacement");
    }
    if (utf8::encode(text.substr(s.start, s.end - s.start)) != s.surface) {
      throw data_error("plan: span surface does not match the text");
    }
    if (plan.chosen[i] == s.surface || plan.chosen[i].empty()) {
      throw data_error("plan: replacement must differ from the original word");
    }
    if (!plan.proposals.empty()) {
      const auto& props = plan.proposals[i];
      if (std::none_of(props.begin(), props.end(),
                       [&](const Candidate& c) { return c.text == plan.chosen[i]; })) {
        throw data_error("plan: chosen word not among the proposals");
      }
    }
  }
}

std::string apply_plan(const ReplacementPlan& plan) {
  // Overlap is reported before the other invariants so callers can tell it
  // apart from malformed plans.
  std::vector<Span> sorted = plan.targets;
  std::sort(sorted.begin(), sorted.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].start < sorted[i - 1].end) throw data_error("overlapping replacement");
  }
  check_plan(plan);
  std::u32string text = utf8::decode(plan.original);
  for (std::size_t i = plan.targets.size(); i-- > 0;) {
    const Span& s = plan.targets[i];
    text.replace(s.start, s.end - s.start, utf8::decode(plan.chosen[i]));
  }
  return utf8::encode(text);
}

}  // namespace sarc::augment
