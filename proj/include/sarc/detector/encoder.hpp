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
#include <string>
#include <vector>

#include "sarc/corpus/vocab.hpp"
#include "sarc/nn/layers.hpp"

namespace sarc::detector {

enum class EncoderMode { kSmallScratch, kPretrainedCheckpoint };

std::string encoder_mode_name(EncoderMode m);
EncoderMode parse_encoder_mode(const std::string& s);

struct TextEncoderConfig {
  EncoderMode mode = EncoderMode::kSmallScratch;
  std::filesystem::path checkpoint;  // pretrained_checkpoint only
  std::size_t layers = 2;
  std::size_t heads = 2;
  std::size_t d = 64;
  std::size_t ffn_hidden = 128;
  std::size_t t_max = 64;

  void validate() const;
};

// Encoder input: [SOS] text [SEP context] [EOS], then PAD. The separator id
// is one past the corpus vocabulary.
struct EncoderInput {
  std::vector<int> ids;
  std::size_t length = 0;
  bool truncated = false;
};

EncoderInput build_encoder_input(const corpus::CommentRecord& record, const corpus::Vocab& vocab,
                                 std::size_t t_max);

// Bidirectional transformer; H is the final hidden state at position 0.
class TextEncoder {
 public:
  TextEncoder(const TextEncoderConfig& config, std::size_t vocab_size, std::uint64_t seed);

  const TextEncoderConfig& config() const { return config_; }
  std::size_t vocab_size() const { return vocab_size_; }
  int sep_id() const { return static_cast<int>(vocab_size_); }
  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }

  // inputs padded to a common `steps`; returns [batch, d].
  nn::Tensor encode(const std::vector<EncoderInput>& inputs, std::size_t steps) const;
  // Pads to the longest input of the batch.
  nn::Tensor encode(const std::vector<EncoderInput>& inputs) const;

  // Standalone encoder weights for pretrained_checkpoint mode.
  void save(const std::filesystem::path& dir, const corpus::Vocab& vocab) const;

 private:
  TextEncoderConfig config_;
  std::size_t vocab_size_;
  nn::ParamStore params_;
  nn::Tensor embed_;
  std::vector<nn::EncoderLayer> layers_;
};

// Loads an encoder saved by TextEncoder::save. Shape fields of `config`
// are replaced by the stored ones; the stored vocabulary is returned.
TextEncoder load_pretrained_encoder(TextEncoderConfig& config, corpus::Vocab& vocab);

}  // namespace sarc::detector
