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

#include "sarc/harness/ablation.hpp"

#include <algorithm>

#include "sarc/common/error.hpp"

namespace sarc::harness {

using detector::BehaviorFeature;

FeatureSet all_features() {
  return FeatureSet(detector::kAllBehaviorFeatures.begin(), detector::kAllBehaviorFeatures.end());
}

Ablation ablate_features(const FeatureSet& features, const FeatureSet& drop) {
  auto has = [](const FeatureSet& s, BehaviorFeature f) {
    return std::find(s.begin(), s.end(), f) != s.end();
  };
  for (auto f : drop) {
    if (!has(features, f)) {
      throw config_error("cannot drop " + detector::feature_name(f) + ": not in the feature set");
    }
  }
  Ablation a;
  a.mask = detector::full_mask();
  // Features absent from F are masked as well, so the mask always matches
  // the remaining set.
  for (auto f : detector::kAllBehaviorFeatures) {
    if (has(features, f) && !has(drop, f)) {
      a.remaining.push_back(f);
      continue;
    }
    const auto [b, e] = detector::feature_columns(f);
    for (std::size_t j = b; j < e; ++j) a.mask[j] = 0.0;
  }
  return a;
}

FeatureSet parse_feature_set(const std::string& spec) {
  FeatureSet out;
  if (spec.empty() || spec == "none") return out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t end = std::min(spec.find('+', start), spec.size());
    const auto f = detector::parse_feature(spec.substr(start, end - start));
    if (std::find(out.begin(), out.end(), f) != out.end()) {
      throw config_error("feature listed twice in '" + spec + "'");
    }
    out.push_back(f);
    start = end + 1;
  }
  return out;
}

std::string feature_set_name(const FeatureSet& drop) {
  if (drop.empty()) return "none";
  std::string s;
  for (auto f : drop) s += (s.empty() ? "" : "+") + detector::feature_name(f);
  return s;
}

}  // namespace sarc::harness
