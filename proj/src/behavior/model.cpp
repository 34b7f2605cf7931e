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

#include "sarc/behavior/model.hpp"

#include <numeric>

#include "sarc/common/error.hpp"

namespace sarc::behavior {

using nn::Matrix;
using nn::Tensor;

void BehaviorGanConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw config_error("behavior.lambda must be in [0,1]");
  if (content_dim == 0 || modality_hidden == 0 || hidden == 0 || disc_hidden == 0) {
    throw config_error("behavior layer widths must be positive");
  }
  if (batch_size < 2) throw config_error("behavior.batch_size must be at least 2");
  if (!(lr_generator > 0.0) || !(lr_discriminator > 0.0)) {
    throw config_error("behavior learning rates must be positive");
  }
}

BehaviorGenerator::BehaviorGenerator(const BehaviorGanConfig& config, std::uint64_t seed)
    : config_(config) {
  Rng rng = Rng::substream(seed, "behavior.generator.init");
  const std::size_t h = config.modality_hidden;
  content_ = nn::Linear(params_, "bgen.content", config.content_dim, h, rng);
  topic_ = nn::Linear(params_, "bgen.topic", corpus::kTopicCount, h, rng);
  hierarchy_ = nn::Linear(params_, "bgen.hierarchy", corpus::kHierarchyCount, h, rng);
  fused_ = nn::Linear(params_, "bgen.fused", 3 * h + config.noise_dim, config.hidden, rng);
  out_ = nn::Linear(params_, "bgen.out", config.hidden, kBehaviorWidth, rng);
}

Tensor BehaviorGenerator::operator()(const Tensor& basic, const Tensor& noise) const {
  const std::size_t c = config_.content_dim;
  if (basic.cols() != config_.basic_width() || noise.cols() != config_.noise_dim ||
      basic.rows() != noise.rows()) {
    throw data_error("behavior generator input shape mismatch");
  }
  std::vector<Tensor> blocks = {
      nn::relu(content_(nn::slice_cols(basic, 0, c))),
      nn::relu(topic_(nn::slice_cols(basic, c, c + corpus::kTopicCount))),
      nn::relu(hierarchy_(nn::slice_cols(basic, c + corpus::kTopicCount, basic.cols())))};
  if (config_.noise_dim > 0) blocks.push_back(noise);
  const Tensor raw = out_(nn::relu(fused_(nn::concat_cols(blocks))));
  return nn::concat_cols({nn::sigmoid(nn::slice_cols(raw, 0, kTopicCol)),
                          nn::softmax_rows(nn::slice_cols(raw, kTopicCol, kSarcasmCol)),
                          nn::sigmoid(nn::slice_cols(raw, kSarcasmCol, kBehaviorWidth))});
}

BehaviorDiscriminator::BehaviorDiscriminator(const BehaviorGanConfig& config,
                                             std::uint64_t seed) {
  Rng rng = Rng::substream(seed, "behavior.discriminator.init");
  hidden_ = nn::Linear(params_, "bdisc.hidden", config.basic_width() + kBehaviorWidth,
                       config.disc_hidden, rng);
  out_ = nn::Linear(params_, "bdisc.out", config.disc_hidden, 1, rng);
}

Tensor BehaviorDiscriminator::operator()(const Tensor& basic, const Tensor& behavior) const {
  return nn::sigmoid(out_(nn::relu(hidden_(nn::concat_cols({basic, behavior})))));
}

GeneratorLosses generator_loss_from_probs(const Tensor& d_fake, const Tensor& gb,
                                          const Matrix& rb, double lambda) {
  if (!gb.value().same_shape(rb)) throw data_error("GB and RB batches are not aligned");
  GeneratorLosses out;
  out.l_t = nn::bce_prob(d_fake, std::vector<double>(d_fake.size(), 1.0));
  out.l_c = nn::bce_prob(gb, rb.values());
  out.l_g = nn::add(nn::scale(out.l_t, lambda), nn::scale(out.l_c, 1.0 - lambda));
  return out;
}

GeneratorLosses generator_loss(const BehaviorDiscriminator& disc, const Tensor& pe,
                               const Tensor& gb, const Matrix& rb, double lambda) {
  return generator_loss_from_probs(disc(pe, gb), gb, rb, lambda);
}

DiscriminatorLosses discriminator_loss_from_probs(const Tensor& d_real, const Tensor& d_fake,
                                                  const Tensor& d_neg) {
  DiscriminatorLosses out;
  out.l_r = nn::bce_prob(d_real, std::vector<double>(d_real.size(), 1.0));
  out.l_f = nn::bce_prob(d_fake, std::vector<double>(d_fake.size(), 0.0));
  out.l_h = nn::bce_prob(d_neg, std::vector<double>(d_neg.size(), 0.0));
  out.l_d = nn::add(out.l_r, nn::scale(nn::add(out.l_f, out.l_h), 0.5));
  return out;
}

DiscriminatorLosses discriminator_loss(const BehaviorDiscriminator& disc, const Tensor& pe,
                                       const Tensor& rb, const Tensor& gb,
                                       const std::vector<std::size_t>& perm) {
  const std::size_t n = pe.rows();
  if (n < 2) throw data_error("need ≥2 samples for negative pairing");
  if (perm.size() != n) throw data_error("negative pairing permutation has the wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] == i) throw data_error("negative pairing must not reuse a record's own behavior");
  }
  const Tensor ne = nn::select_rows(pe, perm);
  return discriminator_loss_from_probs(disc(pe, rb), disc(pe, gb), disc(ne, rb));
}

std::vector<std::size_t> derangement(std::size_t n, Rng& rng) {
  if (n < 2) throw data_error("need ≥2 samples for negative pairing");
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(i)]);
  return p;
}

}  // namespace sarc::behavior
