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

#include "sarc/detector/encoder.hpp"

#include <algorithm>

#include "sarc/common/error.hpp"
#include "sarc/common/jsonl.hpp"
#include "sarc/common/utf8.hpp"

namespace sarc::detector {

using corpus::Vocab;
using nn::Matrix;
using nn::Tensor;

std::string encoder_mode_name(EncoderMode m) {
  return m == EncoderMode::kSmallScratch ? "small_scratch" : "pretrained_checkpoint";
}

EncoderMode parse_encoder_mode(const std::string& s) {
  if (s == "small_scratch") return EncoderMode::kSmallScratch;
  if (s == "pretrained_checkpoint") return EncoderMode::kPretrainedCheckpoint;
  throw config_error("det.encoder must be small_scratch or pretrained_checkpoint, got '" + s +
                     "'");
}

void TextEncoderConfig::validate() const {
  if (mode == EncoderMode::kPretrainedCheckpoint) {
    // Shapes come from the checkpoint manifest.
    if (checkpoint.empty()) {
      throw config_error("pretrained_checkpoint mode needs an encoder checkpoint path");
    }
    return;
  }
  if (layers == 0 || heads == 0 || d == 0 || ffn_hidden == 0) {
    throw config_error("detector encoder sizes must be positive");
  }
  if (d % heads != 0) throw config_error("det.d must be divisible by the head count");
  if (t_max < 3) throw config_error("detector t_max must be at least 3");
}

EncoderInput build_encoder_input(const corpus::CommentRecord& record, const Vocab& vocab,
                                 std::size_t t_max) {
  const std::u32string text = utf8::decode(record.text);
  std::u32string context;
  if (record.context && !utf8::is_blank(*record.context)) context = utf8::decode(*record.context);

  // Room for content between SOS and EOS; drop trailing context, then text.
  const std::size_t room = t_max - 2;
  const std::size_t n_text = std::min(text.size(), room);
  std::size_t n_ctx = 0;
  if (!context.empty() && room > n_text + 1) n_ctx = std::min(context.size(), room - n_text - 1);

  EncoderInput in;
  in.truncated = n_text < text.size() || n_ctx < context.size();
  in.ids.assign(t_max, Vocab::kPad);
  std::size_t t = 0;
  in.ids[t++] = Vocab::kSos;
  for (std::size_t i = 0; i < n_text; ++i) in.ids[t++] = vocab.index_of(text[i]);
  if (n_ctx > 0) {
    in.ids[t++] = static_cast<int>(vocab.size());
    for (std::size_t i = 0; i < n_ctx; ++i) in.ids[t++] = vocab.index_of(context[i]);
  }
  in.ids[t++] = Vocab::kEos;
  in.length = t;
  return in;
}

TextEncoder::TextEncoder(const TextEncoderConfig& config, std::size_t vocab_size,
                         std::uint64_t seed)
    : config_(config), vocab_size_(vocab_size) {
  if (config_.d % config_.heads != 0) {
    throw config_error("det.d must be divisible by the head count");
  }
  Rng rng = Rng::substream(seed, "detector.encoder.init");
  // One extra row for the separator.
  embed_ = params_.add("det.encoder.embed", nn::normal_init(vocab_size + 1, config_.d, 0.1, rng));
  for (std::size_t l = 0; l < config_.layers; ++l) {
    layers_.emplace_back(params_, "det.encoder.layer" + std::to_string(l), config_.d,
                         config_.heads, config_.ffn_hidden, rng);
  }
}

Tensor TextEncoder::encode(const std::vector<EncoderInput>& inputs) const {
  std::size_t steps = 1;
  for (const auto& in : inputs) steps = std::max(steps, in.length);
  return encode(inputs, steps);
}

Tensor TextEncoder::encode(const std::vector<EncoderInput>& inputs, std::size_t steps) const {
  const std::size_t batch = inputs.size();
  const std::size_t d = config_.d;
  if (batch == 0) throw data_error("cannot encode an empty batch");
  std::vector<int> ids(batch * steps, Vocab::kPad);
  std::vector<bool> mask(batch * steps, false);
  std::vector<std::size_t> cls(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    if (inputs[b].length > steps) throw data_error("encoder input longer than the padded width");
    for (std::size_t t = 0; t < inputs[b].length; ++t) {
      ids[b * steps + t] = inputs[b].ids[t];
      mask[b * steps + t] = true;
    }
    cls[b] = b * steps;
  }
  const Matrix pe = nn::sinusoidal_positions(steps, d);
  Matrix tiled(batch * steps, d);
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy(pe.data(), pe.data() + pe.size(), tiled.data() + b * steps * d);
  }
  Tensor h = nn::add(nn::embedding(embed_, ids), Tensor::constant(std::move(tiled)));
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) h = layers_[l](h, batch, steps, mask);

  // Only position 0 leaves the encoder, so the last layer runs its queries
  // and feed-forward on that row alone.
  const nn::EncoderLayer& last = layers_.back();
  const Tensor q = nn::select_rows(h, cls);
  const Tensor a = last.attn(q, h, batch, 1, steps, false, mask);
  const Tensor x = last.norm1(nn::add(q, a));
  return last.norm2(nn::add(x, last.ffn(x)));
}

void TextEncoder::save(const std::filesystem::path& dir, const Vocab& vocab) const {
  if (vocab.size() != vocab_size_) throw data_error("vocabulary does not match the encoder");
  std::filesystem::create_directories(dir);
  vocab.save(dir / "vocab.txt");
  params_.save(dir / "encoder.bin");
  const Json manifest{{"format", "sarc-text-encoder"},
                      {"layers", config_.layers},
                      {"heads", config_.heads},
                      {"d", config_.d},
                      {"ffn_hidden", config_.ffn_hidden},
                      {"t_max", config_.t_max}};
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

TextEncoder load_pretrained_encoder(TextEncoderConfig& config, Vocab& vocab) {
  const auto dir = config.checkpoint;
  const Json m = Json::parse(read_text(dir / "manifest.json"), nullptr, false);
  if (m.is_discarded() || m.value("format", "") != "sarc-text-encoder") {
    throw data_error(dir.string() + " is not a text encoder checkpoint");
  }
  try {
    config.layers = m.at("layers").get<std::size_t>();
    config.heads = m.at("heads").get<std::size_t>();
    config.d = m.at("d").get<std::size_t>();
    config.ffn_hidden = m.at("ffn_hidden").get<std::size_t>();
    config.t_max = m.at("t_max").get<std::size_t>();
  } catch (const Json::exception& e) {
    throw data_error(std::string("malformed encoder manifest: ") + e.what());
  }
  vocab = Vocab::load(dir / "vocab.txt");
  TextEncoder enc(config, vocab.size(), 0);
  enc.params().load(dir / "encoder.bin");
  return enc;
}

}  // namespace sarc::detector
