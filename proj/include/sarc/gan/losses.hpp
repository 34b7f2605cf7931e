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

#include <vector>

#include "sarc/corpus/encoding.hpp"
#include "sarc/gan/critic.hpp"
#include "sarc/gan/generator.hpp"

namespace sarc::gan {

// Real sequences with their conditions, all padded to one length.
struct SequenceBatch {
  std::vector<corpus::TokenSequence> sequences;
  nn::Matrix conditions;    // [batch, 9]
  std::vector<int> labels;  // 0 sarcastic, 1 non-sarcastic
  std::size_t size() const { return sequences.size(); }
  std::size_t steps() const {
    return sequences.empty() ? 0 : sequences.front().t_max();
  }
  std::vector<int> flat_ids() const;
};

SequenceBatch make_batch(const std::vector<corpus::CommentRecord>& records,
                         const corpus::Vocab& vocab, std::size_t t_max);

// Next-token targets for teacher forcing: position t predicts ids[t+1];
// PAD targets are -1. Length batch * (steps - 1).
std::vector<int> next_token_targets(const std::vector<corpus::TokenSequence>& seqs);

// -(1/batch) * sum of log-softmax(logits)[target] over targets >= 0.
nn::Tensor masked_nll(const nn::Tensor& logits, const std::vector<int>& targets,
                      std::size_t batch);

// Teacher-forced negative log-likelihood of the real sequences.
nn::Tensor pretrain_loss(const Generator& gen, const SequenceBatch& batch,
                         const nn::Matrix& z);

struct CriticLoss {
  nn::Tensor total;
  double e_real = 0.0;
  double e_fake = 0.0;
  double gp = 0.0;
};

// E_fake[D] - E_real[D] + lambda_gp * GP, with GP at the interpolated
// embeddings eps*real + (1-eps)*fake.
CriticLoss discriminator_loss(const Critic& critic, const nn::Tensor& real_emb,
                              const nn::Tensor& fake_emb, const nn::Matrix& f,
                              std::size_t batch, std::size_t steps,
                              double lambda_gp, const std::vector<double>& eps);

// Mean of -log C(S, f)[y] over samples.
nn::Tensor classifier_nll(const Classifier& cls, const nn::Tensor& x_emb,
                          const nn::Matrix& f, const std::vector<int>& labels,
                          std::size_t steps);

// (L_C_real + L_C_fake) / 2.
nn::Tensor classifier_loss(const Classifier& cls, const nn::Tensor& real_emb,
                           const nn::Matrix& real_f,
                           const std::vector<int>& real_labels,
                           const nn::Tensor& fake_emb, const nn::Matrix& fake_f,
                           const std::vector<int>& fake_labels, std::size_t steps);

struct GeneratorLoss {
  nn::Tensor total;
  double adversarial = 0.0;
  double classification = 0.0;
};

// alpha * (-E_fake[D]) + (1 - alpha) * L_C_fake on soft generator output
// fake_soft [batch*steps, |V|]. Terms with zero weight are left out of the
// graph entirely.
GeneratorLoss generator_loss(const Critic& critic, const Classifier& cls,
                             const nn::Tensor& fake_soft, const nn::Matrix& f,
                             const std::vector<int>& labels, std::size_t steps,
                             double alpha);

}  // namespace sarc::gan
