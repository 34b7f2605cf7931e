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

#include <memory>
#include <vector>

#include "sarc/behavior/features.hpp"
#include "sarc/detector/encoder.hpp"
#include "sarc/detector/user_features.hpp"

namespace sarc::detector {

struct DetectorConfig {
  TextEncoderConfig encoder;
  std::size_t m = 16;           // user embedding width
  std::size_t user_layers = 1;  // stacked ReLU layers
  double lr = 1e-4;
  std::size_t batch_size = 32;
  std::size_t patience = 3;
  std::size_t max_epochs = 20;
  // Reload the best-validation weights after early stopping.
  bool restore_best = true;
  std::uint64_t seed = 1;
  FeatureMask feature_mask = full_mask();

  void validate() const;
};

// u = ReLU(W x + b), stacked.
class UserEmbedding {
 public:
  UserEmbedding() = default;
  UserEmbedding(nn::ParamStore& store, std::size_t in, std::size_t m, std::size_t layers,
                Rng& rng);
  nn::Tensor operator()(const nn::Tensor& x) const;
  std::vector<nn::Linear>& layers() { return layers_; }

 private:
  std::vector<nn::Linear> layers_;
};

// Single shared linear layer over [H, u]; returns the logit z.
class FusionHead {
 public:
  FusionHead() = default;
  FusionHead(nn::ParamStore& store, std::size_t d, std::size_t m, Rng& rng);
  nn::Tensor combine(const nn::Tensor& h, const nn::Tensor& u) const;
  nn::Tensor logit(const nn::Tensor& combined) const { return linear_(combined); }
  nn::Linear& linear() { return linear_; }

 private:
  nn::Linear linear_;
};

struct ForwardResult {
  nn::Tensor logits;    // [batch, 1]
  nn::Tensor combined;  // [batch, d + m]
};

class Detector {
 public:
  // small_scratch: fresh encoder over `vocab`. pretrained_checkpoint: the
  // encoder and its vocabulary come from config.encoder.checkpoint.
  Detector(DetectorConfig config, corpus::Vocab vocab, behavior::BehaviorNormalizer normalizer);

  const DetectorConfig& config() const { return config_; }
  const corpus::Vocab& vocab() const { return vocab_; }
  const behavior::BehaviorNormalizer& normalizer() const { return normalizer_; }
  TextEncoder& encoder() { return *encoder_; }
  const TextEncoder& encoder() const { return *encoder_; }
  UserEmbedding& user() { return user_; }
  FusionHead& head() { return head_; }
  nn::ParamStore& fusion_params() { return fusion_params_; }
  const nn::ParamStore& fusion_params() const { return fusion_params_; }
  std::vector<nn::Tensor> all_parameters() const;
  std::size_t combined_width() const { return config_.encoder.d + config_.m; }

  void set_feature_mask(const FeatureMask& mask) { config_.feature_mask = mask; }

  std::vector<EncoderInput> inputs(const std::vector<corpus::CommentRecord>& records) const;
  ForwardResult forward(const std::vector<corpus::CommentRecord>& records) const;

 private:
  DetectorConfig config_;
  corpus::Vocab vocab_;
  behavior::BehaviorNormalizer normalizer_;
  std::unique_ptr<TextEncoder> encoder_;
  nn::ParamStore fusion_params_;
  UserEmbedding user_;
  FusionHead head_;
};

}  // namespace sarc::detector
