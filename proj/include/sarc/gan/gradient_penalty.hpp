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

#include <functional>
#include <vector>

#include "sarc/common/rng.hpp"
#include "sarc/gan/critic.hpp"

namespace sarc::gan {

// Per-sample interpolation weights eps ~ U(0,1); x_hat = eps*real + (1-eps)*fake.
std::vector<double> interpolation_coefficients(std::size_t n, Rng& rng);

// Interpolates [batch*steps, width] blocks sample by sample.
nn::Matrix interpolate(const nn::Matrix& real, const nn::Matrix& fake,
                       const std::vector<double>& eps, std::size_t steps);

// Gradient of a critic with respect to one flattened sample.
using InputGradient = std::function<std::vector<double>(const std::vector<double>&)>;

// mean_i (||grad D(x_hat_i)||_2 - 1)^2 for samples stored as rows of
// real/fake. Works for any critic that can report its input gradient.
double gradient_penalty(const InputGradient& grad, const nn::Matrix& real,
                        const nn::Matrix& fake, const std::vector<double>& eps);

// dD/dx over the embedding columns of a TextCNN critic, computed in closed
// form from the active max-pool windows. Result: [batch*steps, embed_dim].
nn::Matrix critic_input_gradient(const Critic& critic, const nn::Matrix& x_emb,
                                 const nn::Matrix& f, std::size_t batch,
                                 std::size_t steps);

// Same penalty as gradient_penalty() for the TextCNN critic at x_hat, as a
// differentiable function of the convolution kernels and the score head.
// A sample whose gradient vanishes contributes exactly 1.
nn::Tensor critic_gradient_penalty(const Critic& critic, const nn::Matrix& x_hat,
                                   const nn::Matrix& f, std::size_t batch,
                                   std::size_t steps);

}  // namespace sarc::gan
