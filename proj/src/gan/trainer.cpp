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

#include "sarc/gan/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sarc/common/error.hpp"
#include "sarc/common/utf8.hpp"
#include "sarc/gan/gradient_penalty.hpp"

namespace sarc::gan {

using nn::Matrix;
using nn::Tensor;

void AdversarialConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("gan.alpha must be in (0,1)");
  if (!(lambda_gp > 0.0)) throw config_error("gan.lambda_gp must be positive");
  if (n_critic == 0) throw config_error("gan.n_critic must be positive");
  if (batch_size == 0) throw config_error("gan.batch_size must be positive");
  if (t_max < 3) throw config_error("gan.t_max must be at least 3");
  for (double lr : {lr_generator, lr_critic, lr_classifier, lr_pretrain}) {
    if (!(lr > 0.0)) throw config_error("gan learning rates must be positive");
  }
}

namespace {

nn::AdamConfig adam(double lr) {
  nn::AdamConfig c;
  c.lr = lr;
  c.beta1 = 0.5;
  c.beta2 = 0.9;
  c.clip_norm = 5.0;
  return c;
}

nn::AdamConfig pretrain_adam(double lr) {
  nn::AdamConfig c;
  c.lr = lr;
  c.clip_norm = 5.0;
  return c;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw divergence_error(std::string(what) + " diverged");
}

void require_finite_grads(const nn::ParamStore& p, const char* what) {
  if (!p.grads_finite()) {
    throw divergence_error(std::string(what) + " produced non-finite gradients");
  }
}

}  // namespace

GanModel::GanModel(const GanConfig& config)
    : config_(config),
      generator_(config.generator, config.train.seed),
      critic_(config.critic, config.train.seed),
      classifier_(config.classifier, config.train.seed),
      opt_pretrain_(generator_.params().tensors(), pretrain_adam(config.train.lr_pretrain)),
      opt_generator_(generator_.params().tensors(), adam(config.train.lr_generator)),
      opt_critic_(critic_.params().tensors(), adam(config.train.lr_critic)),
      opt_classifier_(classifier_.params().tensors(), adam(config.train.lr_classifier)),
      rng_(Rng::substream(config.train.seed, "gan.train")) {
  config_.train.validate();
  const std::size_t longest = *std::max_element(config.critic.kernel_sizes.begin(),
                                                config.critic.kernel_sizes.end());
  if (config.train.t_max < longest) {
    throw config_error("gan.t_max shorter than the widest critic kernel");
  }
}

double GanModel::pretrain_step(const SequenceBatch& batch) {
  opt_pretrain_.zero_grad();
  const Matrix z = sample_noise(batch.size(), config_.generator.noise_dim, rng_);
  const Tensor loss = pretrain_loss(generator_, batch, z);
  const double value = loss.item();
  require_finite(value, "pretraining loss");
  loss.backward();
  require_finite_grads(generator_.params(), "pretraining");
  opt_pretrain_.step();
  return value;
}

LossReport GanModel::adversarial_step(const SequenceBatch& real) {
  if (!pretrained_) throw state_error("adversarial training requires a pretrained generator");
  const std::size_t batch = real.size();
  const std::size_t steps = real.steps();
  if (batch == 0) throw data_error("empty batch");
  const auto& cfg = config_.train;
  const std::vector<int> real_ids = real.flat_ids();

  const Matrix z = sample_noise(batch, config_.generator.noise_dim, rng_);
  const auto generated =
      generator_.generate(z, real.conditions, steps, DecodeMode::kSample, rng_.next_u64());
  std::vector<corpus::TokenSequence> fake_seqs;
  for (const auto& g : generated) fake_seqs.push_back(g.sequence);
  Matrix fake_soft_value;
  {
    nn::NoGradGuard ng;
    const Tensor memory = generator_.project_memory(Tensor::constant(z),
                                                    Tensor::constant(real.conditions));
    fake_soft_value = generator_.soft_sequence(fake_seqs, memory).value();
  }
  const Tensor fake_soft_const = Tensor::constant(fake_soft_value);

  LossReport report;
  for (std::size_t i = 0; i < cfg.n_critic; ++i) {
    opt_critic_.zero_grad();
    const auto eps = interpolation_coefficients(batch, rng_);
    const CriticLoss ld = discriminator_loss(
        critic_, critic_.embed_ids(real_ids), critic_.embed_soft(fake_soft_const),
        real.conditions, batch, steps, cfg.lambda_gp, eps);
    ld.total.backward();
    require_finite_grads(critic_.params(), "discriminator");
    opt_critic_.step();
    report.l_d = ld.total.item();
    report.e_real = ld.e_real;
    report.e_fake = ld.e_fake;
    report.gp = ld.gp;
  }

  opt_generator_.zero_grad();
  {
    const Tensor memory = generator_.project_memory(Tensor::constant(z),
                                                    Tensor::constant(real.conditions));
    const Tensor soft = generator_.soft_sequence(fake_seqs, memory);
    const GeneratorLoss lg = generator_loss(critic_, classifier_, soft, real.conditions,
                                            real.labels, steps, cfg.alpha);
    lg.total.backward();
    require_finite_grads(generator_.params(), "generator");
    opt_generator_.step();
    report.l_g_adv = lg.adversarial;
    report.l_g_cls = lg.classification;
    report.l_g = lg.total.item();
  }
  critic_.params().zero_grad();
  classifier_.params().zero_grad();

  opt_classifier_.zero_grad();
  const Tensor lc = classifier_loss(classifier_, classifier_.embed_ids(real_ids),
                                    real.conditions, real.labels,
                                    classifier_.embed_soft(fake_soft_const),
                                    real.conditions, real.labels, steps);
  report.l_c = lc.item();
  require_finite(report.l_c, "classifier loss");
  lc.backward();
  require_finite_grads(classifier_.params(), "classifier");
  opt_classifier_.step();

  ++adversarial_steps_;
  return report;
}

std::vector<GeneratedSequence> GanModel::sample(const Matrix& conditions,
                                                DecodeMode mode,
                                                std::uint64_t seed) const {
  Rng rng = Rng::substream(seed, "gan.sample.noise");
  const Matrix z = sample_noise(conditions.rows(), config_.generator.noise_dim, rng);
  return generator_.generate(z, conditions, config_.train.t_max, mode, seed);
}

namespace {

std::vector<std::vector<std::size_t>> minibatches(std::size_t n, std::size_t size,
                                                  Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; i += size) {
    out.emplace_back(order.begin() + static_cast<long>(i),
                     order.begin() + static_cast<long>(std::min(n, i + size)));
  }
  return out;
}

std::vector<corpus::CommentRecord> pick(const std::vector<corpus::CommentRecord>& rs,
                                        const std::vector<std::size_t>& idx) {
  std::vector<corpus::CommentRecord> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(rs[i]);
  return out;
}

}  // namespace

void train_gan(GanModel& model, const std::vector<corpus::CommentRecord>& records,
               const corpus::Vocab& vocab, const TrainSchedule& schedule,
               const ProgressFn& progress) {
  if (records.empty()) throw data_error("no training records for the generator");
  const auto& cfg = model.config().train;
  Rng rng = Rng::substream(cfg.seed, "gan.batches");
  if (!model.pretrained()) {
    for (std::size_t epoch = 0; epoch < schedule.pretrain_epochs; ++epoch) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const auto& idx : minibatches(records.size(), cfg.batch_size, rng)) {
        sum += model.pretrain_step(make_batch(pick(records, idx), vocab, cfg.t_max));
        ++count;
      }
      if (progress) progress("pretrain", epoch + 1, sum / static_cast<double>(count));
    }
    model.mark_pretrained();
  }
  for (std::size_t step = 0; step < schedule.adversarial_steps; ++step) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < std::min(cfg.batch_size, records.size()); ++i) {
      idx.push_back(rng.below(records.size()));
    }
    const LossReport r =
        model.adversarial_step(make_batch(pick(records, idx), vocab, cfg.t_max));
    if (progress) progress("adversarial", step + 1, r.l_d);
  }
}

std::vector<corpus::CommentRecord> generate_records(
    const GanModel& model, const corpus::Vocab& vocab,
    const std::vector<corpus::CommentRecord>& conditions, std::uint64_t seed,
    const std::string& id_prefix) {
  std::vector<corpus::CommentRecord> out;
  const std::size_t chunk = 64;
  for (std::size_t begin = 0; begin < conditions.size(); begin += chunk) {
    const std::size_t end = std::min(conditions.size(), begin + chunk);
    Matrix f(end - begin, corpus::kConditionWidth);
    for (std::size_t i = begin; i < end; ++i) {
      const auto c = corpus::encode_condition(conditions[i]);
      std::copy(c.values.begin(), c.values.end(), f.row(i - begin).begin());
    }
    const auto seqs = model.sample(f, DecodeMode::kSample,
                                   mix_seed(seed, "chunk" + std::to_string(begin)));
    for (std::size_t i = begin; i < end; ++i) {
      std::string text = corpus::decode(seqs[i - begin].sequence, vocab);
      if (utf8::is_blank(text)) continue;
      corpus::CommentRecord r;
      r.id = id_prefix + std::to_string(i);
      r.text = std::move(text);
      r.label = conditions[i].label;
      r.topic = conditions[i].topic;
      r.hierarchy = conditions[i].hierarchy;
      r.context = conditions[i].context;
      r.provenance = "gan";
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace sarc::gan
