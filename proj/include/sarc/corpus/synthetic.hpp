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

namespace sarc::corpus {

struct SyntheticOptions {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  double sarcastic_share = 0.5;
  bool with_behavior = true;
  // Separable fixture: text drawn independently of the label and
  // sarcasm_rate in [0, 0.5 - margin] or [0.5 + margin, 1] by label.
  bool separable = false;
  double margin = 0.3;
  std::string id_prefix = "s";
};

// Template-based Chinese comments with labels, topics, hierarchy, context
// and (optionally) plausible user behavior blocks. Used as a seed corpus
// for desk-scale runs and as test fixtures.
std::vector<CommentRecord> make_synthetic_corpus(const SyntheticOptions& options);

}  // namespace sarc::corpus
