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

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sarc/detector/fusion.hpp"
#include "sarc/harness/metrics.hpp"

namespace sarc::detector {

// Vocabulary and behavior scaling are fitted on the training split.
std::unique_ptr<Detector> make_detector(const DetectorConfig& config,
                                        const std::vector<corpus::CommentRecord>& train);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  harness::MetricsReport val;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_f1 = 0.0;

  Json to_json() const;
};

using DetectorEpochFn = std::function<void(const EpochRecord&)>;

// BCE on y = P(sarcastic). Early-stops once `patience` epochs pass without a
// strictly better validation sarcastic F1, then restores the best weights.
TrainHistory train_detector(Detector& detector, const std::vector<corpus::CommentRecord>& train,
                            const std::vector<corpus::CommentRecord>& val,
                            const DetectorEpochFn& on_epoch = {});

struct Prediction {
  std::string id;
  double prob = 0.0;
  corpus::Label label = corpus::Label::kSarcastic;
};

// y >= 0.5 is SARCASTIC.
corpus::Label decide(double prob);

std::vector<Prediction> predict(const Detector& detector,
                                const std::vector<corpus::CommentRecord>& records,
                                std::size_t batch_size = 32);

harness::MetricsReport evaluate(const Detector& detector,
                                const std::vector<corpus::CommentRecord>& records);

void write_predictions(const std::filesystem::path& path, const std::vector<Prediction>& preds);

// CSV: id,label,prob,e0..e{d+m-1} with the fused vector per record.
void export_embeddings(const Detector& detector, const std::vector<corpus::CommentRecord>& records,
                       const std::filesystem::path& path);

void save_detector(const std::filesystem::path& dir, const Detector& detector);
std::unique_ptr<Detector> load_detector(const std::filesystem::path& dir);

Json detector_config_to_json(const DetectorConfig& c);
DetectorConfig detector_config_from_json(const Json& j);

}  // namespace sarc::detector
