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

#include "sarc/behavior/features.hpp"
#include "sarc/common/rng.hpp"
#include "sarc/nn/layers.hpp"

namespace sarc::behavior {

struct BehaviorGanConfig {
  std::size_t content_dim = 32;
  std::size_t modality_hidden = 16;
  std::size_t hidden = 32;
  std::size_t noise_dim = 8;
  std::size_t disc_hidden = 32;
  double lambda = 0.5;
  double lr_generator = 1e-3;
  double lr_discriminator = 1e-3;
  std::size_t batch_size = 64;
  std::size_t epochs = 30;
  std::uint64_t seed = 1;

  std::size_t basic_width() const {
    return content_dim + corpus::kTopicCount + corpus::kHierarchyCount;
  }
  void validate() const;
};

// One linear block per modality (content, topic, hierarchy), a fused hidden
// layer with noise, then sigmoid on the scalar outputs and softmax on the
// topic block.
class BehaviorGenerator {
 public:
  BehaviorGenerator(const BehaviorGanConfig& config, std::uint64_t seed);
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // basic: [batch, basic_width], noise: [batch, noise_dim] -> [batch, 9].
  nn::Tensor operator()(const nn::Tensor& basic, const nn::Tensor& noise) const;

 private:
  BehaviorGanConfig config_;
  nn::ParamStore params_;
  nn::Linear content_, topic_, hierarchy_, fused_, out_;
};

// Probability that (basic features, behavior) is a genuine pair.
class BehaviorDiscriminator {
 public:
  BehaviorDiscriminator(const BehaviorGanConfig& config, std::uint64_t seed);
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // -> [batch, 1] in (0, 1).
  nn::Tensor operator()(const nn::Tensor& basic, const nn::Tensor& behavior) const;

 private:
  nn::ParamStore params_;
  nn::Linear hidden_, out_;
};

struct GeneratorLosses {
  nn::Tensor l_t;  // J(D(PE+GB), 1)
  nn::Tensor l_c;  // J(RB, GB), elementwise with RB as soft targets
  nn::Tensor l_g;  // lambda * l_t + (1 - lambda) * l_c
};

GeneratorLosses generator_loss_from_probs(const nn::Tensor& d_fake, const nn::Tensor& gb,
                                          const nn::Matrix& rb, double lambda);
GeneratorLosses generator_loss(const BehaviorDiscriminator& disc, const nn::Tensor& pe,
                               const nn::Tensor& gb, const nn::Matrix& rb, double lambda);

struct DiscriminatorLosses {
  nn::Tensor l_r;  // J(D(PE+RB), 1)
  nn::Tensor l_f;  // J(D(PE+GB), 0)
  nn::Tensor l_h;  // J(D(NE+RB), 0)
  nn::Tensor l_d;  // l_r + l_f/2 + l_h/2
};

DiscriminatorLosses discriminator_loss_from_probs(const nn::Tensor& d_real,
                                                  const nn::Tensor& d_fake,
                                                  const nn::Tensor& d_neg);
// NE pairs row perm[i] of PE with row i of RB; perm must be a derangement.
DiscriminatorLosses discriminator_loss(const BehaviorDiscriminator& disc, const nn::Tensor& pe,
                                       const nn::Tensor& rb, const nn::Tensor& gb,
                                       const std::vector<std::size_t>& perm);

// Uniform random cyclic permutation (Sattolo), so no index maps to itself.
std::vector<std::size_t> derangement(std::size_t n, Rng& rng);

}  // namespace sarc::behavior
