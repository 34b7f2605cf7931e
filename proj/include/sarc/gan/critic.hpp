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

#include "sarc/corpus/encoding.hpp"
#include "sarc/nn/layers.hpp"

namespace sarc::gan {

struct ConvNetConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 64;
  std::size_t cond_dim = corpus::kConditionWidth;
  std::vector<std::size_t> kernel_sizes = {2, 3, 4, 5};
  std::size_t channels = 64;
};

// Token embedding plus multi-width convolution over [Emb(S); f broadcast].
// Real sequences are embedded from ids, generator output from per-position
// distributions (probability-weighted embedding rows).
class ConvFeatureNet {
 public:
  ConvFeatureNet(const ConvNetConfig& config, const std::string& prefix,
                 std::uint64_t seed);
  virtual ~ConvFeatureNet() = default;

  const ConvNetConfig& config() const { return config_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  const nn::TextCnn& cnn() const { return cnn_; }
  const nn::Tensor& embedding_table() const { return embed_; }

  nn::Tensor embed_ids(const std::vector<int>& ids) const;
  // soft: [rows, |V|] distributions.
  nn::Tensor embed_soft(const nn::Tensor& soft) const;

  // x_emb: [batch*steps, embed_dim]; f: [batch, cond_dim] -> [batch, K*C].
  nn::Tensor features(const nn::Tensor& x_emb, const nn::Tensor& f,
                      std::size_t batch, std::size_t steps) const;

 protected:
  ConvNetConfig config_;
  nn::ParamStore params_;
  nn::Tensor embed_;
  nn::TextCnn cnn_;
};

// Wasserstein critic: unbounded score per sample.
class Critic : public ConvFeatureNet {
 public:
  Critic(const ConvNetConfig& config, std::uint64_t seed);

  const nn::Linear& head() const { return fc_; }

  // -> [batch, 1]
  nn::Tensor score(const nn::Tensor& x_emb, const nn::Tensor& f,
                   std::size_t batch, std::size_t steps) const {
    return fc_(features(x_emb, f, batch, steps));
  }

 private:
  nn::Linear fc_;
};

// Auxiliary label classifier. The label block of f is zeroed on input so
// the prediction comes from the text and the remaining conditions.
class Classifier : public ConvFeatureNet {
 public:
  Classifier(const ConvNetConfig& config, std::uint64_t seed);

  // -> [batch, 2] log-probabilities.
  nn::Tensor log_probs(const nn::Tensor& x_emb, const nn::Tensor& f,
                       std::size_t batch, std::size_t steps) const;

 private:
  nn::Linear fc_;
};

}  // namespace sarc::gan
