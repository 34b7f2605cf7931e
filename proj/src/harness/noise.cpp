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

#include "sarc/harness/noise.hpp"

#include <algorithm>

#include "sarc/common/error.hpp"
#include "sarc/common/rng.hpp"

namespace sarc::harness {

std::size_t NoisyLabels::flip_count() const {
  return static_cast<std::size_t>(std::count(flipped.begin(), flipped.end(), true));
}

NoisyLabels inject_label_noise(const std::vector<corpus::Label>& labels, double p,
                               std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw config_error("noise probability must be in [0,1]");
  Rng rng = Rng::substream(seed, "harness.noise");
  NoisyLabels out;
  out.labels = labels;
  out.flipped.resize(labels.size(), false);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!corpus::is_binary(labels[i])) throw data_error("label noise needs binary labels");
    // One draw per label keeps the mask aligned across p for a fixed seed.
    const double u = rng.uniform();
    if (u < p) {
      out.labels[i] = corpus::flip(labels[i]);
      out.flipped[i] = true;
    }
  }
  return out;
}

std::vector<corpus::CommentRecord> with_label_noise(
    const std::vector<corpus::CommentRecord>& records, double p, std::uint64_t seed) {
  std::vector<corpus::Label> labels;
  labels.reserve(records.size());
  for (const auto& r : records) labels.push_back(r.label);
  const auto noisy = inject_label_noise(labels, p, seed);
  auto out = records;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].label = noisy.labels[i];
  return out;
}

}  // namespace sarc::harness
