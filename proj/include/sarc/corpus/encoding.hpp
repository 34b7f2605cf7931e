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

#include <array>
#include <string>
#include <vector>

#include "sarc/corpus/record.hpp"
#include "sarc/corpus/vocab.hpp"

namespace sarc::corpus {

inline constexpr std::size_t kDefaultTMax = 64;

// ids = [SOS, content..., EOS, PAD...] of fixed length t_max.
struct TokenSequence {
  std::vector<int> ids;
  std::vector<bool> mask;  // true on non-PAD positions
  std::size_t length = 0;  // number of non-PAD positions

  std::size_t t_max() const { return ids.size(); }
  // Checks the structural invariants; empty string when valid.
  std::string check(std::size_t vocab_size) const;
};

TokenSequence encode_text(const std::string& text, const Vocab& vocab,
                          std::size_t t_max = kDefaultTMax);
// Builds a sequence from content ids, truncating content to fit.
TokenSequence encode_ids(const std::vector<int>& content, std::size_t t_max);
// Content between SOS and the first EOS; UNK renders as U+FFFD.
std::string decode(const TokenSequence& seq, const Vocab& vocab);
std::string decode_ids(const std::vector<int>& ids, const Vocab& vocab);

inline constexpr std::size_t kConditionWidth = 9;

// [label one-hot (2) | topic one-hot (5) | hierarchy one-hot (2)]
struct ConditionalFeature {
  std::array<double, kConditionWidth> values{};
};

ConditionalFeature encode_condition(Label label, Topic topic, Hierarchy hierarchy);
inline ConditionalFeature encode_condition(const CommentRecord& r) {
  return encode_condition(r.label, r.topic, r.hierarchy);
}

}  // namespace sarc::corpus
