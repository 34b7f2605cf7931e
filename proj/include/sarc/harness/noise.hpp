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
#include <vector>

#include "sarc/corpus/record.hpp"

namespace sarc::harness {

struct NoisyLabels {
  std::vector<corpus::Label> labels;
  std::vector<bool> flipped;

  std::size_t flip_count() const;
};

// Each label flips to its opposite independently with probability p.
NoisyLabels inject_label_noise(const std::vector<corpus::Label>& labels, double p,
                               std::uint64_t seed);

// Applies the noise to a copy of the records' labels.
std::vector<corpus::CommentRecord> with_label_noise(
    const std::vector<corpus::CommentRecord>& records, double p, std::uint64_t seed);

}  // namespace sarc::harness
