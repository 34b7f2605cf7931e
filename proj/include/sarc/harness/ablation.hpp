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

#include <string>
#include <vector>

#include "sarc/detector/user_features.hpp"

namespace sarc::harness {

using FeatureSet = std::vector<detector::BehaviorFeature>;

struct Ablation {
  FeatureSet remaining;
  detector::FeatureMask mask;  // 0 on dropped columns, 1 elsewhere
};

FeatureSet all_features();

// F \ F'. Throws config_error when F' is not a subset of F.
Ablation ablate_features(const FeatureSet& features, const FeatureSet& drop);

// "none", "SR", "CC+TD", ...
FeatureSet parse_feature_set(const std::string& spec);
std::string feature_set_name(const FeatureSet& drop);

}  // namespace sarc::harness
