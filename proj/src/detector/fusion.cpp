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

#include "sarc/detector/fusion.hpp"

#include "sarc/common/error.hpp"
#include "sarc/common/log.hpp"

namespace sarc::detector {

using nn::Tensor;

void DetectorConfig::validate() const {
  encoder.validate();
  if (m == 0 || user_layers == 0) throw config_error("det.m and user layers must be positive");
  if (!(lr > 0.0)) throw config_error("det.lr must be positive");
  if (batch_size == 0) throw config_error("det.batch must be positive");
  if (max_epochs == 0) throw config_error("detector max_epochs must be positive");
}

UserEmbedding::UserEmbedding(nn::ParamStore& store, std::size_t in, std::size_t m,
                             std::size_t layers, Rng& rng) {
  for (std::size_t l = 0; l < layers; ++l) {
    layers_.emplace_back(store, "det.user" + std::to_string(l), l == 0 ? in : m, m, rng);
  }
}

Tensor UserEmbedding::operator()(const Tensor& x) const {
  if (layers_.empty()) throw state_error("user embedding has no layers");
  if (x.cols() != layers_.front().in_features()) {
    throw data_error("user feature width " + std::to_string(x.cols()) + " != " +
                     std::to_string(layers_.front().in_features()));
  }
  Tensor u = x;
  for (const auto& layer : layers_) u = nn::relu(layer(u));
  return u;
}

FusionHead::FusionHead(nn::ParamStore& store, std::size_t d, std::size_t m, Rng& rng)
    : linear_(store, "det.head", d + m, 1, rng) {
  // Start from y = 0.5 for every input instead of a random text projection.
  linear_.w.mutable_value().fill(0.0);
}

Tensor FusionHead::combine(const Tensor& h, const Tensor& u) const {
  return nn::concat_cols({h, u});
}

Detector::Detector(DetectorConfig config, corpus::Vocab vocab,
                   behavior::BehaviorNormalizer normalizer)
    : config_(std::move(config)), vocab_(std::move(vocab)), normalizer_(normalizer) {
  config_.validate();
  if (config_.encoder.mode == EncoderMode::kPretrainedCheckpoint) {
    encoder_ = std::make_unique<TextEncoder>(load_pretrained_encoder(config_.encoder, vocab_));
    config_.encoder.validate();
  } else {
    encoder_ = std::make_unique<TextEncoder>(config_.encoder, vocab_.size(), config_.seed);
  }
  Rng rng = Rng::substream(config_.seed, "detector.fusion.init");
  user_ = UserEmbedding(fusion_params_, kUserFeatureWidth, config_.m, config_.user_layers, rng);
  head_ = FusionHead(fusion_params_, config_.encoder.d, config_.m, rng);
}

std::vector<Tensor> Detector::all_parameters() const {
  std::vector<Tensor> out = encoder_->params().tensors();
  for (const auto& t : fusion_params_.tensors()) out.push_back(t);
  return out;
}

std::vector<EncoderInput> Detector::inputs(
    const std::vector<corpus::CommentRecord>& records) const {
  std::vector<EncoderInput> out;
  out.reserve(records.size());
  std::size_t truncated = 0;
  for (const auto& r : records) {
    out.push_back(build_encoder_input(r, vocab_, config_.encoder.t_max));
    truncated += out.back().truncated ? 1 : 0;
  }
  if (truncated > 0) {
    log_warn(std::to_string(truncated) + " record(s) truncated to the encoder length " +
             std::to_string(config_.encoder.t_max));
  }
  return out;
}

ForwardResult Detector::forward(const std::vector<corpus::CommentRecord>& records) const {
  const Tensor h = encoder_->encode(inputs(records));
  const Tensor x =
      Tensor::constant(user_feature_matrix(records, normalizer_, config_.feature_mask));
  ForwardResult r;
  r.combined = head_.combine(h, user_(x));
  r.logits = head_.logit(r.combined);
  return r;
}

}  // namespace sarc::detector
