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

// Differentiable operations on 2-D tensors. Sequences are laid out as
// [batch * time, width] with sample-major rows.

#include <cstddef>
#include <vector>

#include "sarc/nn/tensor.hpp"

namespace sarc::nn {

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
Tensor scale(const Tensor& a, double s);
Tensor add_scalar(const Tensor& a, double s);
// a[m,n] + bias[1,n] on every row.
Tensor add_row(const Tensor& a, const Tensor& bias);
// Elementwise multiply by a constant [1,n] mask on every row.
Tensor mul_row_const(const Tensor& a, const std::vector<double>& mask);

Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);

Tensor log_softmax_rows(const Tensor& a);
Tensor softmax_rows(const Tensor& a);
Tensor layer_norm_rows(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                       double eps = 1e-5);

// Row lookup: out[i] = table[ids[i]].
Tensor embedding(const Tensor& table, const std::vector<int>& ids);
Tensor concat_cols(const std::vector<Tensor>& parts);
Tensor concat_rows(const std::vector<Tensor>& parts);
Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end);
Tensor select_rows(const Tensor& a, const std::vector<std::size_t>& rows);
// Each row of a[b, n] repeated `times` times consecutively -> [b*times, n].
Tensor repeat_rows(const Tensor& a, std::size_t times);
// Mean over valid time steps per sample: x[b*t, n] -> [b, n].
Tensor masked_mean_pool(const Tensor& x, std::size_t batch, std::size_t steps,
                        const std::vector<bool>& mask);

Tensor sum_all(const Tensor& a);
Tensor mean_all(const Tensor& a);
// Sum of a[i, idx[i]] over rows with idx[i] >= 0.
Tensor pick_sum(const Tensor& a, const std::vector<int>& idx);

// Mean binary cross-entropy from logits against constant targets.
Tensor bce_with_logits(const Tensor& logits, const std::vector<double>& targets);
// Mean binary cross-entropy on probabilities; targets may be a tensor
// (soft targets, not differentiated).
Tensor bce_prob(const Tensor& probs, const std::vector<double>& targets);

// Scaled dot-product multi-head attention, fused.
// q: [batch*tq, d], k and v: [batch*tk, d]. key_mask (size batch*tk, or empty)
// marks attendable keys; causal requires tq == tk.
Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v,
                 std::size_t batch, std::size_t tq, std::size_t tk,
                 std::size_t heads, bool causal,
                 const std::vector<bool>& key_mask = {});

// Valid 1-D convolution over time followed by ReLU and max-over-time.
// x: [batch*steps, width], w: [kernel*width, channels], b: [1, channels].
// Returns [batch, channels].
Tensor conv_relu_maxpool(const Tensor& x, const Tensor& w, const Tensor& b,
                         std::size_t batch, std::size_t steps,
                         std::size_t kernel);

}  // namespace sarc::nn
