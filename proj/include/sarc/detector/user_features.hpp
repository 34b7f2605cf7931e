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

#include "sarc/behavior/features.hpp"
#include "sarc/corpus/record.hpp"
#include "sarc/nn/matrix.hpp"

namespace sarc::detector {

// Column layout of the user feature vector x:
//   0-4 topic one-hot, 5-6 hierarchy one-hot, 7 comment count,
//   8-12 topic distribution, 13 sarcasm rate, 14 comment frequency,
//   15 reply ratio.
// The record label is deliberately absent.
inline constexpr std::size_t kUserFeatureWidth = 16;
inline constexpr std::size_t kBehaviorOffset = 7;

enum class BehaviorFeature { kCC, kTD, kSR, kCF, kRR };

inline constexpr std::array<BehaviorFeature, 5> kAllBehaviorFeatures = {
    BehaviorFeature::kCC, BehaviorFeature::kTD, BehaviorFeature::kSR, BehaviorFeature::kCF,
    BehaviorFeature::kRR};

std::string feature_name(BehaviorFeature f);
BehaviorFeature parse_feature(const std::string& name);  // CC, TD, SR, CF, RR
// Half-open column range of a feature in x.
std::pair<std::size_t, std::size_t> feature_columns(BehaviorFeature f);

using FeatureMask = std::array<double, kUserFeatureWidth>;
FeatureMask full_mask();

// Throws data_error when the record has no behavior block.
std::array<double, kUserFeatureWidth> user_feature_vector(
    const corpus::CommentRecord& record, const behavior::BehaviorNormalizer& normalizer);

nn::Matrix user_feature_matrix(const std::vector<corpus::CommentRecord>& records,
                               const behavior::BehaviorNormalizer& normalizer,
                               const FeatureMask& mask);

}  // namespace sarc::detector
