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

#include "sarc/gan/checkpoint.hpp"

#include "sarc/common/error.hpp"

namespace sarc::gan {

namespace fs = std::filesystem;

namespace {

Json conv_to_json(const ConvNetConfig& c) {
  return Json{{"vocab_size", c.vocab_size},   {"embed_dim", c.embed_dim},
              {"cond_dim", c.cond_dim},       {"kernel_sizes", c.kernel_sizes},
              {"channels", c.channels}};
}

ConvNetConfig conv_from_json(const Json& j) {
  ConvNetConfig c;
  c.vocab_size = j.at("vocab_size").get<std::size_t>();
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.cond_dim = j.at("cond_dim").get<std::size_t>();
  c.kernel_sizes = j.at("kernel_sizes").get<std::vector<std::size_t>>();
  c.channels = j.at("channels").get<std::size_t>();
  return c;
}

}  // namespace

Json config_to_json(const GanConfig& config) {
  const auto& g = config.generator;
  const auto& t = config.train;
  return Json{
      {"generator",
       {{"vocab_size", g.vocab_size}, {"d_model", g.d_model}, {"layers", g.layers},
        {"heads", g.heads}, {"ffn_hidden", g.ffn_hidden}, {"noise_dim", g.noise_dim},
        {"cond_dim", g.cond_dim}}},
      {"critic", conv_to_json(config.critic)},
      {"classifier", conv_to_json(config.classifier)},
      {"train",
       {{"alpha", t.alpha}, {"lambda_gp", t.lambda_gp}, {"n_critic", t.n_critic},
        {"lr_generator", t.lr_generator}, {"lr_critic", t.lr_critic},
        {"lr_classifier", t.lr_classifier}, {"lr_pretrain", t.lr_pretrain},
        {"batch_size", t.batch_size}, {"t_max", t.t_max}, {"seed", t.seed}}}};
}

GanConfig config_from_json(const Json& j) {
  try {
    GanConfig c;
    const Json& g = j.at("generator");
    c.generator.vocab_size = g.at("vocab_size").get<std::size_t>();
    c.generator.d_model = g.at("d_model").get<std::size_t>();
    c.generator.layers = g.at("layers").get<std::size_t>();
    c.generator.heads = g.at("heads").get<std::size_t>();
    c.generator.ffn_hidden = g.at("ffn_hidden").get<std::size_t>();
    c.generator.noise_dim = g.at("noise_dim").get<std::size_t>();
    c.generator.cond_dim = g.at("cond_dim").get<std::size_t>();
    c.critic = conv_from_json(j.at("critic"));
    c.classifier = conv_from_json(j.at("classifier"));
    const Json& t = j.at("train");
    c.train.alpha = t.at("alpha").get<double>();
    c.train.lambda_gp = t.at("lambda_gp").get<double>();
    c.train.n_critic = t.at("n_critic").get<std::size_t>();
    c.train.lr_generator = t.at("lr_generator").get<double>();
    c.train.lr_critic = t.at("lr_critic").get<double>();
    c.train.lr_classifier = t.at("lr_classifier").get<double>();
    c.train.lr_pretrain = t.at("lr_pretrain").get<double>();
    c.train.batch_size = t.at("batch_size").get<std::size_t>();
    c.train.t_max = t.at("t_max").get<std::size_t>();
    c.train.seed = t.at("seed").get<std::uint64_t>();
    return c;
  } catch (const Json::exception& e) {
    throw data_error(std::string("malformed GAN checkpoint manifest: ") + e.what());
  }
}

void save_checkpoint(const fs::path& dir, const GanModel& model) {
  fs::create_directories(dir);
  model.generator().params().save(dir / "generator.bin");
  model.critic().params().save(dir / "critic.bin");
  model.classifier().params().save(dir / "classifier.bin");
  Json manifest{{"format", "sarc-gan-checkpoint"},
                {"version", 1},
                {"config", config_to_json(model.config())},
                {"pretrained", model.pretrained()},
                {"adversarial_steps", model.adversarial_steps()}};
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::unique_ptr<GanModel> load_checkpoint(const fs::path& dir) {
  Json manifest;
  try {
    manifest = Json::parse(read_text(dir / "manifest.json"));
  } catch (const Json::exception& e) {
    throw data_error("unreadable GAN checkpoint manifest: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != "sarc-gan-checkpoint") {
    throw data_error(dir.string() + " is not a GAN checkpoint");
  }
  auto model = std::make_unique<GanModel>(config_from_json(manifest.at("config")));
  model->generator().params().load(dir / "generator.bin");
  model->critic().params().load(dir / "critic.bin");
  model->classifier().params().load(dir / "classifier.bin");
  if (manifest.value("pretrained", false)) model->mark_pretrained();
  model->set_adversarial_steps(manifest.value("adversarial_steps", 0L));
  return model;
}

}  // namespace sarc::gan
