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

#include "sarc/behavior/features.hpp"

#include <algorithm>
#include <cmath>

#include "sarc/common/error.hpp"

namespace sarc::behavior {

using nn::Matrix;

ContentEncoder::ContentEncoder(corpus::Vocab vocab, Matrix table, std::size_t t_max)
    : vocab_(std::move(vocab)), table_(std::move(table)), t_max_(t_max) {
  if (table_.rows() != vocab_.size()) {
    throw config_error("content encoder table rows " + std::to_string(table_.rows()) +
                       " != vocabulary size " + std::to_string(vocab_.size()));
  }
  if (t_max_ < 3) throw config_error("content encoder t_max must be at least 3");
}

Matrix ContentEncoder::positions(const corpus::TokenSequence& seq) const {
  Matrix out(seq.t_max(), dim());
  for (std::size_t t = 0; t < seq.t_max(); ++t) {
    auto src = table_.row(static_cast<std::size_t>(seq.ids[t]));
    std::copy(src.begin(), src.end(), out.row(t).begin());
  }
  return out;
}

std::vector<double> BasicCommentFeatures::flatten() const {
  std::vector<double> v = content;
  v.insert(v.end(), topic.begin(), topic.end());
  v.insert(v.end(), hierarchy.begin(), hierarchy.end());
  return v;
}

BasicCommentFeatures extract_basic_features(const corpus::CommentRecord& record,
                                            const ContentEncoder& encoder) {
  const corpus::TokenSequence seq =
      corpus::encode_text(record.text, encoder.vocab(), encoder.t_max());
  const Matrix pos = encoder.positions(seq);
  BasicCommentFeatures f;
  f.content.assign(encoder.dim(), 0.0);
  std::size_t valid = 0;
  for (std::size_t t = 0; t < seq.t_max(); ++t) {
    if (!seq.mask[t]) continue;
    ++valid;
    for (std::size_t j = 0; j < encoder.dim(); ++j) f.content[j] += pos(t, j);
  }
  for (auto& v : f.content) v /= static_cast<double>(valid);
  f.topic[static_cast<std::size_t>(record.topic)] = 1.0;
  f.hierarchy[static_cast<std::size_t>(record.hierarchy)] = 1.0;
  return f;
}

Matrix basic_feature_matrix(const std::vector<corpus::CommentRecord>& records,
                            const ContentEncoder& encoder) {
  const std::size_t width = encoder.dim() + corpus::kTopicCount + corpus::kHierarchyCount;
  Matrix out(records.size(), width);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto v = extract_basic_features(records[i], encoder).flatten();
    std::copy(v.begin(), v.end(), out.row(i).begin());
  }
  return out;
}

BehaviorNormalizer BehaviorNormalizer::fit(const std::vector<corpus::UserBehavior>& real) {
  if (real.empty()) throw data_error("no real behavior blocks to fit the normalizer");
  BehaviorNormalizer n;
  n.count_min = n.freq_min = INFINITY;
  n.count_max = n.freq_max = -INFINITY;
  for (const auto& b : real) {
    const double c = std::log1p(static_cast<double>(b.comment_count));
    const double f = std::log1p(b.comment_frequency);
    n.count_min = std::min(n.count_min, c);
    n.count_max = std::max(n.count_max, c);
    n.freq_min = std::min(n.freq_min, f);
    n.freq_max = std::max(n.freq_max, f);
  }
  // A constant column still needs a non-degenerate range.
  if (n.count_max <= n.count_min) n.count_max = n.count_min + 1.0;
  if (n.freq_max <= n.freq_min) n.freq_max = n.freq_min + 1.0;
  return n;
}

std::array<double, kBehaviorWidth> BehaviorNormalizer::normalize(
    const corpus::UserBehavior& b) const {
  std::array<double, kBehaviorWidth> v{};
  v[kCountCol] = std::clamp((std::log1p(static_cast<double>(b.comment_count)) - count_min) /
                                (count_max - count_min),
                            0.0, 1.0);
  for (std::size_t t = 0; t < corpus::kTopicCount; ++t) v[kTopicCol + t] = b.topic_distribution[t];
  v[kSarcasmCol] = b.sarcasm_rate;
  v[kFrequencyCol] =
      std::clamp((std::log1p(b.comment_frequency) - freq_min) / (freq_max - freq_min), 0.0, 1.0);
  v[kReplyCol] = b.reply_ratio;
  return v;
}

corpus::UserBehavior BehaviorNormalizer::denormalize(std::span<const double> v) const {
  if (v.size() != kBehaviorWidth) throw data_error("behavior vector must have 9 entries");
  corpus::UserBehavior b;
  const double c = std::clamp(v[kCountCol], 0.0, 1.0) * (count_max - count_min) + count_min;
  b.comment_count = static_cast<std::uint64_t>(std::llround(std::max(0.0, std::expm1(c))));
  double total = 0.0;
  for (std::size_t t = 0; t < corpus::kTopicCount; ++t) total += std::max(0.0, v[kTopicCol + t]);
  for (std::size_t t = 0; t < corpus::kTopicCount; ++t) {
    b.topic_distribution[t] = total > 0.0 ? std::max(0.0, v[kTopicCol + t]) / total
                                          : 1.0 / static_cast<double>(corpus::kTopicCount);
  }
  b.sarcasm_rate = std::clamp(v[kSarcasmCol], 0.0, 1.0);
  const double f = std::clamp(v[kFrequencyCol], 0.0, 1.0) * (freq_max - freq_min) + freq_min;
  b.comment_frequency = std::max(0.0, std::expm1(f));
  b.reply_ratio = std::clamp(v[kReplyCol], 0.0, 1.0);
  return b;
}

Json BehaviorNormalizer::to_json() const {
  return Json{{"count_log1p_min", count_min},
              {"count_log1p_max", count_max},
              {"frequency_log1p_min", freq_min},
              {"frequency_log1p_max", freq_max}};
}

BehaviorNormalizer BehaviorNormalizer::from_json(const Json& j) {
  BehaviorNormalizer n;
  n.count_min = j.at("count_log1p_min").get<double>();
  n.count_max = j.at("count_log1p_max").get<double>();
  n.freq_min = j.at("frequency_log1p_min").get<double>();
  n.freq_max = j.at("frequency_log1p_max").get<double>();
  return n;
}

}  // namespace sarc::behavior
