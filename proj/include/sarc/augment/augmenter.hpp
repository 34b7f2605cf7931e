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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sarc/augment/client.hpp"
#include "sarc/augment/plan.hpp"
#include "sarc/corpus/record.hpp"

namespace sarc::augment {

struct AugmentConfig {
  std::size_t factor = 3;        // children per record at most
  std::size_t replacements = 2;  // targets per child
  // When non-zero, children are spread so originals + children reach this
  // count exactly (if proposals suffice).
  std::size_t target_total = 0;
  std::size_t max_in_flight = 4;
  std::size_t attempts_per_child = 4;
  std::uint64_t seed = 1;
};

struct AugmentedChild {
  corpus::CommentRecord record;
  ReplacementPlan plan;
  std::string parent_id;
};

struct SkipEntry {
  std::string parent_id;
  std::size_t wanted = 0;
  std::size_t produced = 0;
  std::string reason;
};

struct AugmentResult {
  // Every original followed by its children, in input order.
  std::vector<corpus::CommentRecord> records;
  std::vector<AugmentedChild> children;
  std::vector<SkipEntry> skips;
};

// Children copy label, topic, hierarchy, context and behavior from the
// parent, take ids "<parent>.augN" and provenance "augmented". Shortfalls
// are listed in `skips`, never dropped silently.
AugmentResult augment_dataset(const std::vector<corpus::CommentRecord>& records,
                              const ReplacementClient& client, const AugmentConfig& config);

}  // namespace sarc::augment
