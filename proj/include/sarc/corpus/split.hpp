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

struct SplitRatios {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
};

struct DatasetSplit {
  std::vector<CommentRecord> train;
  std::vector<CommentRecord> val;
  std::vector<CommentRecord> test;
};

// Label-stratified, seeded partition. val and test sizes are floor(n * ratio)
// and the remainder goes to train; each class is spread so that every split
// holds within one record of its proportional share.
DatasetSplit split_dataset(const std::vector<CommentRecord>& records,
                           SplitRatios ratios, std::uint64_t seed);

}  // namespace sarc::corpus
