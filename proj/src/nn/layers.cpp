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

#include "sarc/nn/layers.hpp"

#include <cmath>

#include "sarc/common/error.hpp"

namespace sarc::nn {

Linear::Linear(ParamStore& store, const std::string& name, std::size_t in,
               std::size_t out, Rng& rng)
    : w(store.add(name + ".w", glorot(in, out, rng))),
      b(store.add(name + ".b", Matrix(1, out))) {}

LayerNorm::LayerNorm(ParamStore& store, const std::string& name,
                     std::size_t width)
    : gamma(store.add(name + ".gamma", Matrix(1, width, 1.0))),
      beta(store.add(name + ".beta", Matrix(1, width))) {}

MultiHeadAttention::MultiHeadAttention(ParamStore& store,
                                       const std::string& name,
                                       std::size_t width, std::size_t heads_,
                                       Rng& rng)
    : q(store, name + ".q", width, width, rng),
      k(store, name + ".k", width, width, rng),
      v(store, name + ".v", width, width, rng),
      o(store, name + ".o", width, width, rng),
      heads(heads_) {
  if (heads == 0 || width % heads != 0) {
    throw config_error("attention width " + std::to_string(width) +
                       " not divisible by " + std::to_string(heads) + " heads");
  }
}

Tensor MultiHeadAttention::operator()(const Tensor& xq, const Tensor& xkv,
                                      std::size_t batch, std::size_t tq,
                                      std::size_t tk, bool causal,
                                      const std::vector<bool>& key_mask) const {
  return o(attention(q(xq), k(xkv), v(xkv), batch, tq, tk, heads, causal,
                     key_mask));
}

FeedForward::FeedForward(ParamStore& store, const std::string& name,
                         std::size_t width, std::size_t hidden, Rng& rng)
    : up(store, name + ".up", width, hidden, rng),
      down(store, name + ".down", hidden, width, rng) {}

DecoderLayer::DecoderLayer(ParamStore& store, const std::string& name,
                           std::size_t width, std::size_t heads,
                           std::size_t hidden, Rng& rng)
    : self_attn(store, name + ".self_attn", width, heads, rng),
      cross_attn(store, name + ".cross_attn", width, heads, rng),
      ffn(store, name + ".ffn", width, hidden, rng),
      norm1(store, name + ".norm1", width),
      norm2(store, name + ".norm2", width),
      norm3(store, name + ".norm3", width) {}

Tensor DecoderLayer::operator()(const Tensor& x, const Tensor& memory,
                                std::size_t batch, std::size_t steps,
                                std::size_t mem_len) const {
  Tensor h = norm1(add(x, self_attn(x, x, batch, steps, steps, true)));
  h = norm2(add(h, cross_attn(h, memory, batch, steps, mem_len, false)));
  return norm3(add(h, ffn(h)));
}

EncoderLayer::EncoderLayer(ParamStore& store, const std::string& name,
                           std::size_t width, std::size_t heads,
                           std::size_t hidden, Rng& rng)
    : attn(store, name + ".attn", width, heads, rng),
      ffn(store, name + ".ffn", width, hidden, rng),
      norm1(store, name + ".norm1", width),
      norm2(store, name + ".norm2", width) {}

Tensor EncoderLayer::operator()(const Tensor& x, std::size_t batch,
                                std::size_t steps,
                                const std::vector<bool>& mask) const {
  Tensor h = norm1(add(x, attn(x, x, batch, steps, steps, false, mask)));
  return norm2(add(h, ffn(h)));
}

TextCnn::TextCnn(ParamStore& store, const std::string& name, std::size_t width_,
                 std::vector<std::size_t> kernel_sizes_, std::size_t channels_,
                 Rng& rng)
    : kernel_sizes(std::move(kernel_sizes_)), channels(channels_), width(width_) {
  for (std::size_t k : kernel_sizes) {
    const std::string base = name + ".conv" + std::to_string(k);
    weights.push_back(store.add(base + ".w", glorot(k * width, channels, rng)));
    biases.push_back(store.add(base + ".b", Matrix(1, channels)));
  }
}

Tensor TextCnn::operator()(const Tensor& x, std::size_t batch,
                           std::size_t steps) const {
  std::vector<Tensor> pooled;
  pooled.reserve(kernel_sizes.size());
  for (std::size_t i = 0; i < kernel_sizes.size(); ++i) {
    pooled.push_back(conv_relu_maxpool(x, weights[i], biases[i], batch, steps,
                                       kernel_sizes[i]));
  }
  return pooled.size() == 1 ? pooled.front() : concat_cols(pooled);
}

Matrix sinusoidal_positions(std::size_t steps, std::size_t width) {
  Matrix pe(steps, width);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < width; ++i) {
      const double rate =
          std::pow(10000.0, -static_cast<double>(2 * (i / 2)) /
                                static_cast<double>(width));
      pe(t, i) = (i % 2 == 0) ? std::sin(t * rate) : std::cos(t * rate);
    }
  }
  return pe;
}

}  // namespace sarc::nn
