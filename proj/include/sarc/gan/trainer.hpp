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
#include <functional>
#include <string>
#include <vector>

#include "sarc/gan/critic.hpp"
#include "sarc/gan/generator.hpp"
#include "sarc/gan/losses.hpp"
#include "sarc/nn/params.hpp"

namespace sarc::gan {

struct AdversarialConfig {
  double alpha = 0.7;
  double lambda_gp = 10.0;
  std::size_t n_critic = 5;
  double lr_generator = 1e-4;
  double lr_critic = 1e-4;
  double lr_classifier = 1e-4;
  double lr_pretrain = 1e-3;
  std::size_t batch_size = 32;
  std::size_t t_max = 64;
  std::uint64_t seed = 1;

  // Throws config_error on the first invalid field.
  void validate() const;
};

struct GanConfig {
  GeneratorConfig generator;
  ConvNetConfig critic;
  ConvNetConfig classifier;
  AdversarialConfig train;
};

struct LossReport {
  double l_d = 0.0;
  double e_real = 0.0;
  double e_fake = 0.0;
  double gp = 0.0;
  double l_g_adv = 0.0;
  double l_g_cls = 0.0;
  double l_g = 0.0;
  double l_c = 0.0;
};

// Generator, critic and classifier with their optimizers and RNG state.
class GanModel {
 public:
  explicit GanModel(const GanConfig& config);

  const GanConfig& config() const { return config_; }
  Generator& generator() { return generator_; }
  const Generator& generator() const { return generator_; }
  Critic& critic() { return critic_; }
  const Critic& critic() const { return critic_; }
  Classifier& classifier() { return classifier_; }
  const Classifier& classifier() const { return classifier_; }

  bool pretrained() const { return pretrained_; }
  void mark_pretrained() { pretrained_ = true; }
  long adversarial_steps() const { return adversarial_steps_; }
  void set_adversarial_steps(long n) { adversarial_steps_ = n; }

  // One teacher-forced generator update; returns the loss before the step.
  double pretrain_step(const SequenceBatch& batch);

  // n_critic critic updates, one generator update, one classifier update.
  // Requires pretraining. On a non-finite loss nothing is stepped and a
  // divergence error is thrown.
  LossReport adversarial_step(const SequenceBatch& real);

  std::vector<GeneratedSequence> sample(const nn::Matrix& conditions,
                                        DecodeMode mode, std::uint64_t seed) const;

 private:
  GanConfig config_;
  Generator generator_;
  Critic critic_;
  Classifier classifier_;
  nn::Adam opt_pretrain_;
  nn::Adam opt_generator_;
  nn::Adam opt_critic_;
  nn::Adam opt_classifier_;
  Rng rng_;
  bool pretrained_ = false;
  long adversarial_steps_ = 0;
};

struct TrainSchedule {
  std::size_t pretrain_epochs = 5;
  std::size_t adversarial_steps = 50;
};

using ProgressFn = std::function<void(const std::string& phase, std::size_t step,
                                      double loss)>;

// Pretraining epochs over shuffled minibatches, then adversarial steps on
// random minibatches.
void train_gan(GanModel& model, const std::vector<corpus::CommentRecord>& records,
               const corpus::Vocab& vocab, const TrainSchedule& schedule,
               const ProgressFn& progress = {});

// Generates one record per requested (label, topic, hierarchy) condition.
// Records whose decoded text is blank are skipped.
std::vector<corpus::CommentRecord> generate_records(
    const GanModel& model, const corpus::Vocab& vocab,
    const std::vector<corpus::CommentRecord>& conditions, std::uint64_t seed,
    const std::string& id_prefix);

}  // namespace sarc::gan
