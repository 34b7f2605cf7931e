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

#include "sarc/common/jsonl.hpp"
#include "sarc/corpus/record.hpp"

namespace sarc::harness {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// SARCASTIC is the positive class for the confusion counts.
struct MetricsReport {
  double accuracy = 0.0;
  ClassMetrics non_sarcastic;
  ClassMetrics sarcastic;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t count() const { return tp + fp + tn + fn; }
  Json to_json() const;
  static MetricsReport from_json(const Json& j);
};

MetricsReport compute_metrics(const std::vector<corpus::Label>& predictions,
                              const std::vector<corpus::Label>& golds);

// Report table layout: Model | Acc. | Non-sarcastic Pre. Rec. F1 | Sarcastic Pre. Rec. F1.
std::string table_header();
std::string table_row(const std::string& model, const MetricsReport& m);

}  // namespace sarc::harness
