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

#include "sarc/gan/critic.hpp"

#include <algorithm>
#include <cmath>

#include "sarc/common/error.hpp"

namespace sarc::gan {

using nn::Tensor;

ConvFeatureNet::ConvFeatureNet(const ConvNetConfig& config,
                               const std::string& prefix, std::uint64_t seed)
    : config_(config) {
  if (config_.vocab_size == 0 || config_.embed_dim == 0 ||
      config_.kernel_sizes.empty() || config_.channels == 0) {
    throw config_error(prefix + ": empty convolution config");
  }
  Rng rng = Rng::substream(seed, prefix + ".init");
  embed_ = params_.add(prefix + ".embed",
                       nn::normal_init(config_.vocab_size, config_.embed_dim,
                                       1.0 / std::sqrt(static_cast<double>(
                                                 config_.embed_dim)),
                                       rng));
  cnn_ = nn::TextCnn(params_, prefix + ".cnn",
                     config_.embed_dim + config_.cond_dim,
                     config_.kernel_sizes, config_.channels, rng);
}

Tensor ConvFeatureNet::embed_ids(const std::vector<int>& ids) const {
  return nn::embedding(embed_, ids);
}

Tensor ConvFeatureNet::embed_soft(const Tensor& soft) const {
  if (soft.cols() != config_.vocab_size) {
    throw data_error("soft sequence width " + std::to_string(soft.cols()) +
                     " != vocabulary " + std::to_string(config_.vocab_size));
  }
  return nn::matmul(soft, embed_);
}

Tensor ConvFeatureNet::features(const Tensor& x_emb, const Tensor& f,
                                std::size_t batch, std::size_t steps) const {
  if (x_emb.rows() != batch * steps || x_emb.cols() != config_.embed_dim) {
    throw data_error("critic input must be [batch*steps, embed_dim]");
  }
  if (f.rows() != batch || f.cols() != config_.cond_dim) {
    throw data_error("critic condition must be [batch, " +
                     std::to_string(config_.cond_dim) + "]");
  }
  const Tensor x = nn::concat_cols({x_emb, nn::repeat_rows(f, steps)});
  return cnn_(x, batch, steps);
}

Critic::Critic(const ConvNetConfig& config, std::uint64_t seed)
    : ConvFeatureNet(config, "critic", seed) {
  Rng rng = Rng::substream(seed, "critic.head");
  fc_ = nn::Linear(params_, "critic.fc", cnn_.out_features(), 1, rng);
}

Classifier::Classifier(const ConvNetConfig& config, std::uint64_t seed)
    : ConvFeatureNet(config, "classifier", seed) {
  Rng rng = Rng::substream(seed, "classifier.head");
  fc_ = nn::Linear(params_, "classifier.fc", cnn_.out_features(), 2, rng);
}

Tensor Classifier::log_probs(const Tensor& x_emb, const Tensor& f,
                             std::size_t batch, std::size_t steps) const {
  std::vector<double> keep(config_.cond_dim, 1.0);
  std::fill(keep.begin(), keep.begin() + std::min<std::size_t>(2, keep.size()), 0.0);
  return nn::log_softmax_rows(
      fc_(features(x_emb, nn::mul_row_const(f, keep), batch, steps)));
}

}  // namespace sarc::gan
