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
#include <optional>
#include <string>
#include <vector>

#include "sarc/behavior/model.hpp"
#include "sarc/nn/params.hpp"

namespace sarc::behavior {

struct EpochReport {
  std::size_t epoch = 0;
  double l_d = 0.0;
  double l_g = 0.0;
  double l_t = 0.0;
  double l_c = 0.0;
};

// Generator, discriminator, content encoder and normalizer as one unit.
class BehaviorModel {
 public:
  BehaviorModel(const BehaviorGanConfig& config, ContentEncoder encoder,
                BehaviorNormalizer normalizer);

  const BehaviorGanConfig& config() const { return config_; }
  const ContentEncoder& encoder() const { return encoder_; }
  const BehaviorNormalizer& normalizer() const { return normalizer_; }
  BehaviorGenerator& generator() { return generator_; }
  const BehaviorGenerator& generator() const { return generator_; }
  BehaviorDiscriminator& discriminator() { return discriminator_; }
  const BehaviorDiscriminator& discriminator() const { return discriminator_; }
  bool trained() const { return trained_; }
  void mark_trained() { trained_ = true; }

  // One discriminator and one generator update on aligned rows.
  EpochReport train_step(const nn::Matrix& basic, const nn::Matrix& real_behavior);

  // Normalized behavior vectors; noise drawn per record id so the result
  // does not depend on batch composition.
  nn::Matrix generate(const std::vector<corpus::CommentRecord>& records) const;

 private:
  BehaviorGanConfig config_;
  ContentEncoder encoder_;
  BehaviorNormalizer normalizer_;
  BehaviorGenerator generator_;
  BehaviorDiscriminator discriminator_;
  nn::Adam opt_g_;
  nn::Adam opt_d_;
  Rng rng_;
  bool trained_ = false;
};

using EpochFn = std::function<void(const EpochReport&)>;

// Trains on the records that carry real behavior blocks; marks the model
// trained. Throws data_error when fewer than two such records exist.
void train_behavior_gan(BehaviorModel& model,
                        const std::vector<corpus::CommentRecord>& records,
                        const EpochFn& on_epoch = {});

// Fills missing behavior blocks (behavior_source "generated"); records that
// already carry one are returned unchanged.
std::vector<corpus::CommentRecord> synthesize_behaviors(
    const std::vector<corpus::CommentRecord>& records, const BehaviorModel& model);

void save_behavior_checkpoint(const std::filesystem::path& dir, const BehaviorModel& model);
std::unique_ptr<BehaviorModel> load_behavior_checkpoint(const std::filesystem::path& dir);

}  // namespace sarc::behavior
