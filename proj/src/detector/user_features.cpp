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

#include "sarc/detector/user_features.hpp"

#include "sarc/common/error.hpp"

namespace sarc::detector {

std::string feature_name(BehaviorFeature f) {
  switch (f) {
    case BehaviorFeature::kCC:
      return "CC";
    case BehaviorFeature::kTD:
      return "TD";
    case BehaviorFeature::kSR:
      return "SR";
    case BehaviorFeature::kCF:
      return "CF";
    case BehaviorFeature::kRR:
      return "RR";
  }
  return "?";
}

BehaviorFeature parse_feature(const std::string& name) {
  for (auto f : kAllBehaviorFeatures) {
    if (feature_name(f) == name) return f;
  }
  throw config_error("unknown behavior feature '" + name + "' (expected CC, TD, SR, CF or RR)");
}

std::pair<std::size_t, std::size_t> feature_columns(BehaviorFeature f) {
  const std::size_t o = kBehaviorOffset;
  switch (f) {
    case BehaviorFeature::kCC:
      return {o + behavior::kCountCol, o + behavior::kCountCol + 1};
    case BehaviorFeature::kTD:
      return {o + behavior::kTopicCol, o + behavior::kSarcasmCol};
    case BehaviorFeature::kSR:
      return {o + behavior::kSarcasmCol, o + behavior::kSarcasmCol + 1};
    case BehaviorFeature::kCF:
      return {o + behavior::kFrequencyCol, o + behavior::kFrequencyCol + 1};
    case BehaviorFeature::kRR:
      return {o + behavior::kReplyCol, o + behavior::kReplyCol + 1};
  }
  return {0, 0};
}

FeatureMask full_mask() {
  FeatureMask m;
  m.fill(1.0);
  return m;
}

std::array<double, kUserFeatureWidth> user_feature_vector(
    const corpus::CommentRecord& record, const behavior::BehaviorNormalizer& normalizer) {
  if (!record.behavior) {
    throw data_error("record " + record.id +
                     " has no behavior block; run behavior-fill to synthesize one first");
  }
  std::array<double, kUserFeatureWidth> x{};
  x[static_cast<std::size_t>(record.topic)] = 1.0;
  x[corpus::kTopicCount + static_cast<std::size_t>(record.hierarchy)] = 1.0;
  const auto b = normalizer.normalize(*record.behavior);
  std::copy(b.begin(), b.end(), x.begin() + kBehaviorOffset);
  return x;
}

nn::Matrix user_feature_matrix(const std::vector<corpus::CommentRecord>& records,
                               const behavior::BehaviorNormalizer& normalizer,
                               const FeatureMask& mask) {
  nn::Matrix out(records.size(), kUserFeatureWidth);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto x = user_feature_vector(records[i], normalizer);
    for (std::size_t j = 0; j < kUserFeatureWidth; ++j) out(i, j) = x[j] * mask[j];
  }
  return out;
}

}  // namespace sarc::detector
