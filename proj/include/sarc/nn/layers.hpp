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

#include <string>
#include <vector>

#include "sarc/common/rng.hpp"
#include "sarc/nn/ops.hpp"
#include "sarc/nn/params.hpp"

namespace sarc::nn {

struct Linear {
  Tensor w;  // [in, out]
  Tensor b;  // [1, out]

  Linear() = default;
  Linear(ParamStore& store, const std::string& name, std::size_t in,
         std::size_t out, Rng& rng);
  Tensor operator()(const Tensor& x) const { return add_row(matmul(x, w), b); }
  std::size_t in_features() const { return w.rows(); }
  std::size_t out_features() const { return w.cols(); }
};

struct LayerNorm {
  Tensor gamma;
  Tensor beta;

  LayerNorm() = default;
  LayerNorm(ParamStore& store, const std::string& name, std::size_t width);
  Tensor operator()(const Tensor& x) const {
    return layer_norm_rows(x, gamma, beta);
  }
};

struct MultiHeadAttention {
  Linear q, k, v, o;
  std::size_t heads = 1;

  MultiHeadAttention() = default;
  MultiHeadAttention(ParamStore& store, const std::string& name,
                     std::size_t width, std::size_t heads, Rng& rng);
  Tensor operator()(const Tensor& xq, const Tensor& xkv, std::size_t batch,
                    std::size_t tq, std::size_t tk, bool causal,
                    const std::vector<bool>& key_mask = {}) const;
};

struct FeedForward {
  Linear up, down;

  FeedForward() = default;
  FeedForward(ParamStore& store, const std::string& name, std::size_t width,
              std::size_t hidden, Rng& rng);
  Tensor operator()(const Tensor& x) const { return down(relu(up(x))); }
};

// Post-norm decoder block: causal self-attention, cross-attention over a
// memory sequence, feed-forward.
struct DecoderLayer {
  MultiHeadAttention self_attn, cross_attn;
  FeedForward ffn;
  LayerNorm norm1, norm2, norm3;

  DecoderLayer() = default;
  DecoderLayer(ParamStore& store, const std::string& name, std::size_t width,
               std::size_t heads, std::size_t hidden, Rng& rng);
  // x: [batch*steps, width]; memory: [batch*mem_len, width].
  Tensor operator()(const Tensor& x, const Tensor& memory, std::size_t batch,
                    std::size_t steps, std::size_t mem_len) const;
};

// Post-norm bidirectional encoder block with key padding mask.
struct EncoderLayer {
  MultiHeadAttention attn;
  FeedForward ffn;
  LayerNorm norm1, norm2;

  EncoderLayer() = default;
  EncoderLayer(ParamStore& store, const std::string& name, std::size_t width,
               std::size_t heads, std::size_t hidden, Rng& rng);
  Tensor operator()(const Tensor& x, std::size_t batch, std::size_t steps,
                    const std::vector<bool>& mask) const;
};

// Multi-width convolution over time with ReLU + max-over-time per width;
// output columns are the per-kernel channel blocks in kernel order.
struct TextCnn {
  std::vector<std::size_t> kernel_sizes;
  std::size_t channels = 0;
  std::size_t width = 0;
  std::vector<Tensor> weights;  // [k*width, channels]
  std::vector<Tensor> biases;   // [1, channels]

  TextCnn() = default;
  TextCnn(ParamStore& store, const std::string& name, std::size_t width,
          std::vector<std::size_t> kernel_sizes, std::size_t channels, Rng& rng);
  Tensor operator()(const Tensor& x, std::size_t batch, std::size_t steps) const;
  std::size_t out_features() const { return kernel_sizes.size() * channels; }
};

Matrix sinusoidal_positions(std::size_t steps, std::size_t width);

}  // namespace sarc::nn
