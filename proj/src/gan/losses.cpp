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

#include "sarc/gan/losses.hpp"

#include <cmath>

#include "sarc/common/error.hpp"
#include "sarc/gan/gradient_penalty.hpp"

namespace sarc::gan {

using nn::Matrix;
using nn::Tensor;

std::vector<int> SequenceBatch::flat_ids() const {
  std::vector<int> ids;
  ids.reserve(size() * steps());
  for (const auto& s : sequences) ids.insert(ids.end(), s.ids.begin(), s.ids.end());
  return ids;
}

SequenceBatch make_batch(const std::vector<corpus::CommentRecord>& records,
                         const corpus::Vocab& vocab, std::size_t t_max) {
  SequenceBatch b;
  b.conditions = Matrix(records.size(), corpus::kConditionWidth);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    b.sequences.push_back(corpus::encode_text(r.text, vocab, t_max));
    const auto f = corpus::encode_condition(r);
    std::copy(f.values.begin(), f.values.end(), b.conditions.row(i).begin());
    b.labels.push_back(static_cast<int>(r.label));
  }
  return b;
}

std::vector<int> next_token_targets(const std::vector<corpus::TokenSequence>& seqs) {
  std::vector<int> targets;
  for (const auto& s : seqs) {
    for (std::size_t t = 1; t < s.t_max(); ++t) {
      targets.push_back(s.ids[t] == corpus::Vocab::kPad ? -1 : s.ids[t]);
    }
  }
  return targets;
}

Tensor masked_nll(const Tensor& logits, const std::vector<int>& targets,
                  std::size_t batch) {
  if (batch == 0) throw data_error("empty batch");
  bool any = false;
  for (int t : targets) any = any || t >= 0;
  if (!any) throw data_error("no valid tokens");
  return nn::scale(nn::pick_sum(nn::log_softmax_rows(logits), targets),
                   -1.0 / static_cast<double>(batch));
}

Tensor pretrain_loss(const Generator& gen, const SequenceBatch& batch,
                     const Matrix& z) {
  if (batch.size() == 0) throw data_error("empty batch");
  const std::size_t steps = batch.steps();
  std::vector<int> inputs;
  for (const auto& s : batch.sequences) {
    inputs.insert(inputs.end(), s.ids.begin(), s.ids.end() - 1);
  }
  const Tensor memory = gen.project_memory(Tensor::constant(z),
                                           Tensor::constant(batch.conditions));
  return masked_nll(gen.logits(inputs, batch.size(), steps - 1, memory),
                    next_token_targets(batch.sequences), batch.size());
}

CriticLoss discriminator_loss(const Critic& critic, const Tensor& real_emb,
                              const Tensor& fake_emb, const Matrix& f,
                              std::size_t batch, std::size_t steps,
                              double lambda_gp, const std::vector<double>& eps) {
  const Tensor fc = Tensor::constant(f);
  const Tensor d_real = nn::mean_all(critic.score(real_emb, fc, batch, steps));
  const Tensor d_fake = nn::mean_all(critic.score(fake_emb, fc, batch, steps));
  CriticLoss out;
  out.e_real = d_real.item();
  out.e_fake = d_fake.item();
  if (!std::isfinite(out.e_real) || !std::isfinite(out.e_fake)) {
    throw divergence_error("discriminator diverged");
  }
  out.total = nn::sub(d_fake, d_real);
  if (lambda_gp != 0.0) {
    const Matrix x_hat = interpolate(real_emb.value(), fake_emb.value(), eps, steps);
    const Tensor gp = critic_gradient_penalty(critic, x_hat, f, batch, steps);
    out.gp = gp.item();
    out.total = nn::add(out.total, nn::scale(gp, lambda_gp));
  }
  if (!std::isfinite(out.total.item())) throw divergence_error("discriminator diverged");
  return out;
}

Tensor classifier_nll(const Classifier& cls, const Tensor& x_emb, const Matrix& f,
                      const std::vector<int>& labels, std::size_t steps) {
  const std::size_t batch = f.rows();
  if (labels.size() != batch) throw data_error("classifier: label count");
  for (int y : labels) {
    if (y != 0 && y != 1) throw data_error("classifier requires binary labels");
  }
  const Tensor lp = cls.log_probs(x_emb, Tensor::constant(f), batch, steps);
  return nn::scale(nn::pick_sum(lp, labels), -1.0 / static_cast<double>(batch));
}

Tensor classifier_loss(const Classifier& cls, const Tensor& real_emb,
                       const Matrix& real_f, const std::vector<int>& real_labels,
                       const Tensor& fake_emb, const Matrix& fake_f,
                       const std::vector<int>& fake_labels, std::size_t steps) {
  return nn::scale(
      nn::add(classifier_nll(cls, real_emb, real_f, real_labels, steps),
              classifier_nll(cls, fake_emb, fake_f, fake_labels, steps)),
      0.5);
}

GeneratorLoss generator_loss(const Critic& critic, const Classifier& cls,
                             const Tensor& fake_soft, const Matrix& f,
                             const std::vector<int>& labels, std::size_t steps,
                             double alpha) {
  const std::size_t batch = f.rows();
  GeneratorLoss out;
  Tensor total;
  if (alpha != 0.0) {
    const Tensor adv = nn::scale(
        nn::mean_all(critic.score(critic.embed_soft(fake_soft),
                                  Tensor::constant(f), batch, steps)),
        -1.0);
    out.adversarial = adv.item();
    total = nn::scale(adv, alpha);
  }
  if (alpha != 1.0) {
    const Tensor c = classifier_nll(cls, cls.embed_soft(fake_soft), f, labels, steps);
    out.classification = c.item();
    const Tensor term = nn::scale(c, 1.0 - alpha);
    total = total.defined() ? nn::add(total, term) : term;
  }
  out.total = total;
  if (!std::isfinite(out.total.item())) throw divergence_error("generator loss diverged");
  return out;
}

}  // namespace sarc::gan
