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
#include <vector>

#include "sarc/common/jsonl.hpp"
#include "sarc/corpus/encoding.hpp"
#include "sarc/nn/matrix.hpp"

namespace sarc::behavior {

// Behavior vector layout: [cc_norm, td x5, sr, cf_norm, rr].
inline constexpr std::size_t kBehaviorWidth = 9;
inline constexpr std::size_t kCountCol = 0;
inline constexpr std::size_t kTopicCol = 1;
inline constexpr std::size_t kSarcasmCol = 6;
inline constexpr std::size_t kFrequencyCol = 7;
inline constexpr std::size_t kReplyCol = 8;

// Frozen per-position content encoder: row lookup in a fixed table.
class ContentEncoder {
 public:
  ContentEncoder(corpus::Vocab vocab, nn::Matrix table, std::size_t t_max);

  const corpus::Vocab& vocab() const { return vocab_; }
  const nn::Matrix& table() const { return table_; }
  std::size_t dim() const { return table_.cols(); }
  std::size_t t_max() const { return t_max_; }

  // [t_max, dim] per-position vectors and the validity mask.
  nn::Matrix positions(const corpus::TokenSequence& seq) const;

 private:
  corpus::Vocab vocab_;
  nn::Matrix table_;
  std::size_t t_max_;
};

struct BasicCommentFeatures {
  std::vector<double> content;
  std::array<double, corpus::kTopicCount> topic{};
  std::array<double, corpus::kHierarchyCount> hierarchy{};

  std::size_t width() const { return content.size() + topic.size() + hierarchy.size(); }
  std::vector<double> flatten() const;
};

// Content is the mean of the encoder rows over valid (non-PAD) positions.
BasicCommentFeatures extract_basic_features(const corpus::CommentRecord& record,
                                            const ContentEncoder& encoder);

// One flattened feature row per record.
nn::Matrix basic_feature_matrix(const std::vector<corpus::CommentRecord>& records,
                                const ContentEncoder& encoder);

// log1p + min-max scaling for the unbounded count and frequency features,
// with constants fitted on real behavior blocks.
struct BehaviorNormalizer {
  double count_min = 0.0, count_max = 1.0;
  double freq_min = 0.0, freq_max = 1.0;

  static BehaviorNormalizer fit(const std::vector<corpus::UserBehavior>& real);
  std::array<double, kBehaviorWidth> normalize(const corpus::UserBehavior& b) const;
  // Inverse map to natural units; clamps into the fitted range.
  corpus::UserBehavior denormalize(std::span<const double> v) const;

  Json to_json() const;
  static BehaviorNormalizer from_json(const Json& j);
};

}  // namespace sarc::behavior
