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

#include "sarc/common/rng.hpp"
#include "sarc/corpus/encoding.hpp"
#include "sarc/nn/layers.hpp"

namespace sarc::gan {

inline constexpr std::size_t kNoiseDim = 128;

struct GeneratorConfig {
  std::size_t vocab_size = 0;
  std::size_t d_model = 128;
  std::size_t layers = 2;
  std::size_t heads = 4;
  std::size_t ffn_hidden = 256;
  std::size_t noise_dim = kNoiseDim;
  std::size_t cond_dim = corpus::kConditionWidth;
};

enum class DecodeMode { kGreedy, kSample };

struct GeneratedSequence {
  corpus::TokenSequence sequence;
  // Log-softmax of the model at every emitted position (length - 1 rows).
  std::vector<std::vector<double>> log_probs;
};

// Transformer decoder conditioned on a single memory slot projected from
// [z; f]. Sequences are [batch * steps] id lists, sample-major.
class Generator {
 public:
  Generator(const GeneratorConfig& config, std::uint64_t seed);

  const GeneratorConfig& config() const { return config_; }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // z: [batch, noise_dim], f: [batch, cond_dim] -> [batch, d_model], >= 0.
  nn::Tensor project_memory(const nn::Tensor& z, const nn::Tensor& f) const;

  // Output-head logits for every input position: [batch * steps, |V|].
  nn::Tensor logits(const std::vector<int>& input_ids, std::size_t batch,
                    std::size_t steps, const nn::Tensor& memory) const;

  // Autoregressive decoding from SOS until EOS or t_max. Token choice never
  // picks PAD or SOS; the final slot is forced to EOS if still open. The
  // per-sample stream for sampling is derived from (seed, sample index).
  std::vector<GeneratedSequence> generate(const nn::Matrix& z,
                                          const nn::Matrix& f,
                                          std::size_t t_max, DecodeMode mode,
                                          std::uint64_t seed) const;

  // Differentiable per-position distributions for fixed sequences:
  // row 0 is one-hot SOS, rows 1..length-1 the softmax that produced each
  // token under teacher forcing, rows past length one-hot PAD.
  // Result: [batch * steps, |V|].
  nn::Tensor soft_sequence(const std::vector<corpus::TokenSequence>& seqs,
                           const nn::Tensor& memory) const;

 private:
  GeneratorConfig config_;
  nn::ParamStore params_;
  nn::Linear proj_;
  nn::Tensor embed_;  // [|V|, d_model]
  std::vector<nn::DecoderLayer> layers_;
  nn::Linear out_;
};

// Draws a [batch, noise_dim] standard-normal block.
nn::Matrix sample_noise(std::size_t batch, std::size_t dim, Rng& rng);

}  // namespace sarc::gan
