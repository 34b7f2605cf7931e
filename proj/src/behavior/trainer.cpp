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

#include "sarc/behavior/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sarc/common/error.hpp"
#include "sarc/common/jsonl.hpp"

namespace sarc::behavior {

using nn::Matrix;
using nn::Tensor;

namespace {

nn::AdamConfig adam(double lr) {
  nn::AdamConfig c;
  c.lr = lr;
  c.beta1 = 0.5;
  return c;
}

Matrix rows_of(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = m.row(idx[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

BehaviorModel::BehaviorModel(const BehaviorGanConfig& config, ContentEncoder encoder,
                             BehaviorNormalizer normalizer)
    : config_(config),
      encoder_(std::move(encoder)),
      normalizer_(normalizer),
      generator_(config, config.seed),
      discriminator_(config, config.seed),
      opt_g_(generator_.params().tensors(), adam(config.lr_generator)),
      opt_d_(discriminator_.params().tensors(), adam(config.lr_discriminator)),
      rng_(Rng::substream(config.seed, "behavior.train")) {
  config_.validate();
  if (encoder_.dim() != config_.content_dim) {
    throw config_error("behavior.content_dim must match the content encoder width");
  }
}

EpochReport BehaviorModel::train_step(const Matrix& basic, const Matrix& real_behavior) {
  const std::size_t n = basic.rows();
  if (real_behavior.rows() != n || real_behavior.cols() != kBehaviorWidth) {
    throw data_error("behavior batch is not aligned with its features");
  }
  const Tensor pe = Tensor::constant(basic);
  const Tensor rb = Tensor::constant(real_behavior);
  Matrix noise(n, config_.noise_dim);
  for (auto& v : noise.values()) v = rng_.normal();
  const Tensor z = Tensor::constant(noise);

  EpochReport r;
  opt_d_.zero_grad();
  Matrix gb_value;
  {
    nn::NoGradGuard ng;
    gb_value = generator_(pe, z).value();
  }
  const auto ld = discriminator_loss(discriminator_, pe, rb, Tensor::constant(gb_value),
                                     derangement(n, rng_));
  r.l_d = ld.l_d.item();
  if (!std::isfinite(r.l_d)) throw divergence_error("behavior discriminator diverged");
  ld.l_d.backward();
  opt_d_.step();

  opt_g_.zero_grad();
  const auto lg = generator_loss(discriminator_, pe, generator_(pe, z), real_behavior,
                                 config_.lambda);
  r.l_g = lg.l_g.item();
  r.l_t = lg.l_t.item();
  r.l_c = lg.l_c.item();
  if (!std::isfinite(r.l_g)) throw divergence_error("behavior generator diverged");
  lg.l_g.backward();
  opt_g_.step();
  discriminator_.params().zero_grad();
  return r;
}

Matrix BehaviorModel::generate(const std::vector<corpus::CommentRecord>& records) const {
  const Matrix basic = basic_feature_matrix(records, encoder_);
  Matrix noise(records.size(), config_.noise_dim);
  for (std::size_t i = 0; i < records.size(); ++i) {
    Rng rng = Rng::substream(config_.seed, "behavior.noise." + records[i].id);
    for (auto& v : noise.row(i)) v = rng.normal();
  }
  nn::NoGradGuard ng;
  return generator_(Tensor::constant(basic), Tensor::constant(noise)).value();
}

void train_behavior_gan(BehaviorModel& model, const std::vector<corpus::CommentRecord>& records,
                        const EpochFn& on_epoch) {
  std::vector<corpus::CommentRecord> real;
  for (const auto& r : records) {
    if (r.behavior && r.behavior_source.value_or("real") == "real") real.push_back(r);
  }
  if (real.size() < 2) throw data_error("need at least two records with real behavior");
  const auto& cfg = model.config();
  const Matrix basic = basic_feature_matrix(real, model.encoder());
  Matrix target(real.size(), kBehaviorWidth);
  for (std::size_t i = 0; i < real.size(); ++i) {
    const auto v = model.normalizer().normalize(*real[i].behavior);
    std::copy(v.begin(), v.end(), target.row(i).begin());
  }
  Rng rng = Rng::substream(cfg.seed, "behavior.batches");
  std::vector<std::size_t> order(real.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    EpochReport sum;
    std::size_t batches = 0;
    for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
      std::vector<std::size_t> idx(order.begin() + static_cast<long>(b),
                                   order.begin() + static_cast<long>(
                                                       std::min(order.size(), b + cfg.batch_size)));
      if (idx.size() < 2) continue;  // a lone row cannot be deranged
      const auto r = model.train_step(rows_of(basic, idx), rows_of(target, idx));
      sum.l_d += r.l_d;
      sum.l_g += r.l_g;
      sum.l_t += r.l_t;
      sum.l_c += r.l_c;
      ++batches;
    }
    sum.epoch = epoch;
    const double k = static_cast<double>(std::max<std::size_t>(1, batches));
    sum.l_d /= k;
    sum.l_g /= k;
    sum.l_t /= k;
    sum.l_c /= k;
    if (on_epoch) on_epoch(sum);
  }
  model.mark_trained();
}

std::vector<corpus::CommentRecord> synthesize_behaviors(
    const std::vector<corpus::CommentRecord>& records, const BehaviorModel& model) {
  if (!model.trained()) throw state_error("behavior generator has not been trained");
  std::vector<corpus::CommentRecord> out = records;
  std::vector<corpus::CommentRecord> missing;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].behavior) {
      missing.push_back(out[i]);
      where.push_back(i);
    }
  }
  if (missing.empty()) return out;
  const Matrix gen = model.generate(missing);
  for (std::size_t j = 0; j < where.size(); ++j) {
    auto& r = out[where[j]];
    r.behavior = model.normalizer().denormalize(gen.row(j));
    r.behavior_source = "generated";
  }
  return out;
}

namespace {

Json config_json(const BehaviorGanConfig& c) {
  return Json{{"content_dim", c.content_dim}, {"modality_hidden", c.modality_hidden},
              {"hidden", c.hidden},           {"noise_dim", c.noise_dim},
              {"disc_hidden", c.disc_hidden}, {"lambda", c.lambda},
              {"lr_generator", c.lr_generator}, {"lr_discriminator", c.lr_discriminator},
              {"batch_size", c.batch_size},   {"epochs", c.epochs},
              {"seed", c.seed}};
}

BehaviorGanConfig config_from(const Json& j) {
  BehaviorGanConfig c;
  c.content_dim = j.at("content_dim").get<std::size_t>();
  c.modality_hidden = j.at("modality_hidden").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  c.noise_dim = j.at("noise_dim").get<std::size_t>();
  c.disc_hidden = j.at("disc_hidden").get<std::size_t>();
  c.lambda = j.at("lambda").get<double>();
  c.lr_generator = j.at("lr_generator").get<double>();
  c.lr_discriminator = j.at("lr_discriminator").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void save_behavior_checkpoint(const std::filesystem::path& dir, const BehaviorModel& model) {
  std::filesystem::create_directories(dir);
  nn::ParamStore enc;
  enc.add("encoder.table", model.encoder().table());
  enc.save(dir / "encoder.bin");
  model.encoder().vocab().save(dir / "vocab.txt");
  model.generator().params().save(dir / "generator.bin");
  model.discriminator().params().save(dir / "discriminator.bin");
  const Json manifest{{"format", "sarc-behavior-checkpoint"},
                      {"version", 1},
                      {"config", config_json(model.config())},
                      {"normalizer", model.normalizer().to_json()},
                      {"encoder", {{"t_max", model.encoder().t_max()},
                                   {"dim", model.encoder().dim()}}},
                      {"trained", model.trained()}};
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::unique_ptr<BehaviorModel> load_behavior_checkpoint(const std::filesystem::path& dir) {
  const Json manifest = Json::parse(read_text(dir / "manifest.json"), nullptr, false);
  if (manifest.is_discarded() || manifest.value("format", "") != "sarc-behavior-checkpoint") {
    throw data_error(dir.string() + " is not a behavior checkpoint");
  }
  try {
    corpus::Vocab vocab = corpus::Vocab::load(dir / "vocab.txt");
    const std::size_t dim = manifest.at("encoder").at("dim").get<std::size_t>();
    nn::ParamStore enc;
    enc.add("encoder.table", Matrix(vocab.size(), dim));
    enc.load(dir / "encoder.bin");
    ContentEncoder encoder(std::move(vocab), enc.get("encoder.table").value(),
                           manifest.at("encoder").at("t_max").get<std::size_t>());
    auto model = std::make_unique<BehaviorModel>(
        config_from(manifest.at("config")), std::move(encoder),
        BehaviorNormalizer::from_json(manifest.at("normalizer")));
    model->generator().params().load(dir / "generator.bin");
    model->discriminator().params().load(dir / "discriminator.bin");
    if (manifest.value("trained", false)) model->mark_trained();
    return model;
  } catch (const Json::exception& e) {
    throw data_error(std::string("malformed behavior checkpoint: ") + e.what());
  }
}

}  // namespace sarc::behavior
