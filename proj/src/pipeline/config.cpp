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

#include "sarc/pipeline/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "sarc/common/error.hpp"
#include "sarc/harness/ablation.hpp"

#ifndef SARC_DEFAULT_ASSET_DIR
#define SARC_DEFAULT_ASSET_DIR "assets"
#endif

namespace sarc::pipeline {

namespace fs = std::filesystem;

namespace {

const std::set<std::string>& seed_keys() {
  static const std::set<std::string> keys = {"gan.seed", "augment.seed", "behavior.seed",
                                             "det.seed"};
  return keys;
}

std::string bad_value(const std::string& key, const std::string& value, const char* want) {
  return "config key '" + key + "': expected " + want + ", got '" + value + "'";
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || end != v.data() + v.size()) {
    throw config_error(bad_value(key, v, "a non-negative integer"));
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
    throw config_error(bad_value(key, v, "a number"));
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw config_error(bad_value(key, v, "true or false"));
}

std::string fmt_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

template <typename Access>
ConfigKey size_key(std::string name, std::string help, Access access) {
  return {name, std::move(help),
          [access](const PipelineConfig& c) {
            return std::to_string(access(const_cast<PipelineConfig&>(c)));
          },
          [access, name](PipelineConfig& c, const std::string& v) {
            access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(to_u64(name, v));
          }};
}

template <typename Access>
ConfigKey real_key(std::string name, std::string help, Access access) {
  return {name, std::move(help),
          [access](const PipelineConfig& c) {
            return fmt_double(access(const_cast<PipelineConfig&>(c)));
          },
          [access, name](PipelineConfig& c, const std::string& v) { access(c) = to_double(name, v); }};
}

template <typename Access>
ConfigKey bool_key(std::string name, std::string help, Access access) {
  return {name, std::move(help),
          [access](const PipelineConfig& c) {
            return std::string(access(const_cast<PipelineConfig&>(c)) ? "true" : "false");
          },
          [access, name](PipelineConfig& c, const std::string& v) { access(c) = to_bool(name, v); }};
}

template <typename Access>
ConfigKey path_key(std::string name, std::string help, Access access) {
  return {name, std::move(help),
          [access](const PipelineConfig& c) {
            return access(const_cast<PipelineConfig&>(c)).string();
          },
          [access](PipelineConfig& c, const std::string& v) { access(c) = fs::path(v); }};
}

std::vector<ConfigKey> build_keys() {
  using C = PipelineConfig;
  std::vector<ConfigKey> k;
  k.push_back(size_key("seed", "global seed; module seeds derive from it unless set",
                       [](C& c) -> std::uint64_t& { return c.seed; }));
  k.push_back(path_key("run_dir", "run directory; every artifact is written below it",
                       [](C& c) -> fs::path& { return c.run_dir; }));

  k.push_back(path_key("corpus.path", "seed corpus (JSONL)",
                       [](C& c) -> fs::path& { return c.corpus.path; }));
  k.push_back(ConfigKey{"corpus.min_freq", "minimum character count for the GAN vocabulary",
                        [](const C& c) { return std::to_string(c.corpus.min_freq); },
                        [](C& c, const std::string& v) {
                          c.corpus.min_freq = static_cast<int>(to_u64("corpus.min_freq", v));
                        }});
  k.push_back(real_key("corpus.val_ratio", "validation share of the final dataset",
                       [](C& c) -> double& { return c.corpus.split.val; }));
  k.push_back(real_key("corpus.test_ratio", "test share of the final dataset",
                       [](C& c) -> double& { return c.corpus.split.test; }));

  k.push_back(real_key("gan.alpha", "adversarial weight in the generator loss, (0,1)",
                       [](C& c) -> double& { return c.gan.model.train.alpha; }));
  k.push_back(real_key("gan.lambda_gp", "gradient penalty coefficient",
                       [](C& c) -> double& { return c.gan.model.train.lambda_gp; }));
  k.push_back(size_key("gan.n_critic", "critic updates per generator update",
                       [](C& c) -> std::size_t& { return c.gan.model.train.n_critic; }));
  k.push_back(size_key("gan.d_model", "generator width",
                       [](C& c) -> std::size_t& { return c.gan.model.generator.d_model; }));
  k.push_back(size_key("gan.layers", "generator decoder layers",
                       [](C& c) -> std::size_t& { return c.gan.model.generator.layers; }));
  k.push_back(size_key("gan.heads", "generator attention heads",
                       [](C& c) -> std::size_t& { return c.gan.model.generator.heads; }));
  k.push_back(size_key("gan.ffn_hidden", "generator feed-forward width",
                       [](C& c) -> std::size_t& { return c.gan.model.generator.ffn_hidden; }));
  k.push_back(ConfigKey{"gan.embed_dim", "critic and classifier embedding width",
                        [](const C& c) { return std::to_string(c.gan.model.critic.embed_dim); },
                        [](C& c, const std::string& v) {
                          c.gan.model.critic.embed_dim = c.gan.model.classifier.embed_dim =
                              to_u64("gan.embed_dim", v);
                        }});
  k.push_back(ConfigKey{"gan.channels", "critic and classifier channels per kernel width",
                        [](const C& c) { return std::to_string(c.gan.model.critic.channels); },
                        [](C& c, const std::string& v) {
                          c.gan.model.critic.channels = c.gan.model.classifier.channels =
                              to_u64("gan.channels", v);
                        }});
  k.push_back(size_key("gan.t_max", "maximum sequence length including SOS and EOS",
                       [](C& c) -> std::size_t& { return c.gan.model.train.t_max; }));
  k.push_back(size_key("gan.batch", "minibatch size",
                       [](C& c) -> std::size_t& { return c.gan.model.train.batch_size; }));
  k.push_back(ConfigKey{"gan.lr", "adversarial learning rate (generator, critic, classifier)",
                        [](const C& c) { return fmt_double(c.gan.model.train.lr_generator); },
                        [](C& c, const std::string& v) {
                          auto& t = c.gan.model.train;
                          t.lr_generator = t.lr_critic = t.lr_classifier = to_double("gan.lr", v);
                        }});
  k.push_back(real_key("gan.lr_pretrain", "teacher-forcing learning rate",
                       [](C& c) -> double& { return c.gan.model.train.lr_pretrain; }));
  k.push_back(size_key("gan.pretrain_epochs", "teacher-forcing epochs",
                       [](C& c) -> std::size_t& { return c.gan.schedule.pretrain_epochs; }));
  k.push_back(size_key("gan.adversarial_steps", "adversarial steps",
                       [](C& c) -> std::size_t& { return c.gan.schedule.adversarial_steps; }));
  k.push_back(size_key("gan.generate", "records to generate (0: seed corpus size)",
                       [](C& c) -> std::size_t& { return c.gan.generate; }));
  k.push_back(size_key("gan.seed", "GAN seed",
                       [](C& c) -> std::uint64_t& { return c.gan.model.train.seed; }));

  k.push_back(size_key("augment.factor", "children per record at most",
                       [](C& c) -> std::size_t& { return c.augment.config.factor; }));
  k.push_back(size_key("augment.replacements", "replaced words per child",
                       [](C& c) -> std::size_t& { return c.augment.config.replacements; }));
  k.push_back(size_key("augment.target_total", "final record count (0: factor only)",
                       [](C& c) -> std::size_t& { return c.augment.config.target_total; }));
  k.push_back(size_key("augment.max_in_flight", "concurrent replacement requests",
                       [](C& c) -> std::size_t& { return c.augment.config.max_in_flight; }));
  k.push_back(ConfigKey{"augment.client", "replacement client: mock or remote",
                        [](const C& c) { return c.augment.client; },
                        [](C& c, const std::string& v) { c.augment.client = v; }});
  k.push_back(path_key("augment.lexicon", "mock client lexicon (empty: bundled)",
                       [](C& c) -> fs::path& { return c.augment.lexicon; }));
  k.push_back(path_key("augment.prompt", "remote client prompt template (empty: bundled)",
                       [](C& c) -> fs::path& { return c.augment.prompt; }));
  k.push_back(size_key("augment.seed", "augmentation seed",
                       [](C& c) -> std::uint64_t& { return c.augment.config.seed; }));

  k.push_back(real_key("behavior.lambda", "weight of the adversarial term in L_G, [0,1]",
                       [](C& c) -> double& { return c.behavior.lambda; }));
  k.push_back(size_key("behavior.hidden", "generator fused hidden width",
                       [](C& c) -> std::size_t& { return c.behavior.hidden; }));
  k.push_back(size_key("behavior.noise_dim", "generator noise width",
                       [](C& c) -> std::size_t& { return c.behavior.noise_dim; }));
  k.push_back(size_key("behavior.epochs", "training epochs",
                       [](C& c) -> std::size_t& { return c.behavior.epochs; }));
  k.push_back(size_key("behavior.batch", "minibatch size",
                       [](C& c) -> std::size_t& { return c.behavior.batch_size; }));
  k.push_back(ConfigKey{"behavior.lr", "generator and discriminator learning rate",
                        [](const C& c) { return fmt_double(c.behavior.lr_generator); },
                        [](C& c, const std::string& v) {
                          c.behavior.lr_generator = c.behavior.lr_discriminator =
                              to_double("behavior.lr", v);
                        }});
  k.push_back(size_key("behavior.seed", "behavior GAN seed",
                       [](C& c) -> std::uint64_t& { return c.behavior.seed; }));

  k.push_back(ConfigKey{"det.encoder", "text encoder: small_scratch or pretrained_checkpoint",
                        [](const C& c) { return detector::encoder_mode_name(c.det.encoder.mode); },
                        [](C& c, const std::string& v) {
                          c.det.encoder.mode = detector::parse_encoder_mode(v);
                        }});
  k.push_back(path_key("det.checkpoint", "encoder checkpoint for pretrained_checkpoint",
                       [](C& c) -> fs::path& { return c.det.encoder.checkpoint; }));
  k.push_back(size_key("det.layers", "encoder layers",
                       [](C& c) -> std::size_t& { return c.det.encoder.layers; }));
  k.push_back(size_key("det.heads", "encoder attention heads",
                       [](C& c) -> std::size_t& { return c.det.encoder.heads; }));
  k.push_back(size_key("det.d", "encoder width",
                       [](C& c) -> std::size_t& { return c.det.encoder.d; }));
  k.push_back(size_key("det.ffn_hidden", "encoder feed-forward width",
                       [](C& c) -> std::size_t& { return c.det.encoder.ffn_hidden; }));
  k.push_back(size_key("det.t_max", "encoder input length",
                       [](C& c) -> std::size_t& { return c.det.encoder.t_max; }));
  k.push_back(size_key("det.m", "user embedding width",
                       [](C& c) -> std::size_t& { return c.det.m; }));
  k.push_back(size_key("det.user_layers", "user embedding layers",
                       [](C& c) -> std::size_t& { return c.det.user_layers; }));
  k.push_back(real_key("det.lr", "learning rate", [](C& c) -> double& { return c.det.lr; }));
  k.push_back(size_key("det.batch", "minibatch size",
                       [](C& c) -> std::size_t& { return c.det.batch_size; }));
  k.push_back(size_key("det.patience", "epochs without improvement before stopping",
                       [](C& c) -> std::size_t& { return c.det.patience; }));
  k.push_back(size_key("det.max_epochs", "epoch limit",
                       [](C& c) -> std::size_t& { return c.det.max_epochs; }));
  k.push_back(bool_key("det.restore_best", "reload the best validation weights after training",
                       [](C& c) -> bool& { return c.det.restore_best; }));
  k.push_back(ConfigKey{"det.drop", "behavior features removed from the input (none, SR, CC+TD)",
                        [](const C& c) { return c.det_drop; },
                        [](C& c, const std::string& v) {
                          c.det.feature_mask =
                              harness::ablate_features(harness::all_features(),
                                                       harness::parse_feature_set(v))
                                  .mask;
                          c.det_drop = v;
                        }});
  k.push_back(size_key("det.seed", "detector seed",
                       [](C& c) -> std::uint64_t& { return c.det.seed; }));

  k.push_back(ConfigKey{"sweep.kind", "noise, robustness, size or ablation",
                        [](const C& c) { return harness::sweep_kind_name(c.sweep.kind); },
                        [](C& c, const std::string& v) { c.sweep.kind = harness::parse_sweep_kind(v); }});
  k.push_back(ConfigKey{"sweep.grid", "comma-separated grid points (empty: default grid)",
                        [](const C& c) { return join(c.sweep.grid); },
                        [](C& c, const std::string& v) { c.sweep.grid = split_list(v); }});
  k.push_back(ConfigKey{"sweep.seeds", "comma-separated training seeds",
                        [](const C& c) {
                          std::vector<std::string> s;
                          for (auto x : c.sweep.seeds) s.push_back(std::to_string(x));
                          return join(s);
                        },
                        [](C& c, const std::string& v) {
                          c.sweep.seeds.clear();
                          for (const auto& s : split_list(v)) {
                            c.sweep.seeds.push_back(to_u64("sweep.seeds", s));
                          }
                        }});
  k.push_back(size_key("sweep.jobs", "parallel training runs",
                       [](C& c) -> std::size_t& { return c.sweep.jobs; }));
  k.push_back(size_key("sweep.robustness_total", "training size per proportion (0: train split)",
                       [](C& c) -> std::size_t& { return c.sweep.robustness_total; }));
  k.push_back(bool_key("sweep.allow_replacement", "top up a short class by resampling",
                       [](C& c) -> bool& { return c.sweep.allow_replacement; }));
  return k;
}

const ConfigKey* find_key(const std::string& name) {
  for (const auto& k : config_keys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void assign(PipelineConfig& c, std::set<std::string>& seen, const std::string& key,
            const std::string& value, const std::string& origin) {
  const ConfigKey* k = find_key(key);
  if (!k) throw config_error("unknown config key '" + key + "' (" + origin + ")");
  k->set(c, value);
  seen.insert(key);
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::vector<std::string> items;
    for (const auto& x : v) items.push_back(scalar_text(x));
    return join(items);
  }
  if (v.is_null()) return "";
  return v.dump();
}

void flatten(const Json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else {
      out.emplace_back(name, scalar_text(value));
    }
  }
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

std::string env_name(const std::string& key) {
  std::string out = "SARC_";
  for (char ch : key) {
    out += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return out;
}

std::pair<std::string, std::string> parse_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw config_error("expected key=value, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

PipelineConfig load_config(const ConfigSources& sources) {
  PipelineConfig c;
  std::set<std::string> seen;
  if (sources.file) {
    Json j;
    try {
      j = Json::parse(read_text(*sources.file));
    } catch (const Json::exception& e) {
      throw config_error("config file " + sources.file->string() + ": " + e.what());
    }
    if (!j.is_object()) throw config_error("config file must hold a JSON object");
    std::vector<std::pair<std::string, std::string>> flat;
    flatten(j, "", flat);
    for (const auto& [k, v] : flat) assign(c, seen, k, v, sources.file->string());
  }
  for (const auto& [k, v] : sources.flags) assign(c, seen, k, v, "command line");
  const auto env = sources.env ? sources.env : [](const std::string& name) {
    const char* v = std::getenv(name.c_str());
    return v ? std::optional<std::string>(v) : std::nullopt;
  };
  for (const auto& key : config_keys()) {
    if (auto v = env(env_name(key.name))) assign(c, seen, key.name, *v, env_name(key.name));
  }
  for (const auto& key : seed_keys()) {
    if (seen.count(key)) continue;
    const std::uint64_t derived = mix_seed(c.seed, key.substr(0, key.find('.')));
    find_key(key)->set(c, std::to_string(derived));
  }
  c.validate();
  return c;
}

void PipelineConfig::validate() const {
  const auto& s = corpus.split;
  if (corpus.min_freq < 1) throw config_error("corpus.min_freq must be at least 1");
  if (!(s.val > 0.0) || !(s.test > 0.0) || !(s.val + s.test < 1.0)) {
    throw config_error("corpus.val_ratio and corpus.test_ratio must be positive and sum below 1");
  }

  const auto& g = gan.model.generator;
  gan.model.train.validate();
  if (g.d_model == 0 || g.layers == 0 || g.heads == 0 || g.ffn_hidden == 0) {
    throw config_error("gan.d_model, gan.layers, gan.heads and gan.ffn_hidden must be positive");
  }
  if (g.d_model % g.heads != 0) throw config_error("gan.heads must divide gan.d_model");
  if (gan.model.critic.embed_dim == 0 || gan.model.critic.channels == 0) {
    throw config_error("gan.embed_dim and gan.channels must be positive");
  }
  const auto& kernels = gan.model.critic.kernel_sizes;
  if (gan.model.train.t_max < *std::max_element(kernels.begin(), kernels.end())) {
    throw config_error("gan.t_max shorter than the widest critic kernel");
  }

  if (augment.client != "mock" && augment.client != "remote") {
    throw config_error("augment.client must be mock or remote, got '" + augment.client + "'");
  }
  if (augment.config.replacements == 0) throw config_error("augment.replacements must be positive");
  if (augment.config.max_in_flight == 0) throw config_error("augment.max_in_flight must be positive");

  behavior.validate();
  if (behavior.epochs == 0) throw config_error("behavior.epochs must be positive");
  det.validate();
  sweep_spec().validate();
}

harness::SweepSpec PipelineConfig::sweep_spec() const {
  harness::SweepSpec spec;
  spec.kind = sweep.kind;
  spec.grid = sweep.grid.empty() ? harness::default_grid(sweep.kind) : sweep.grid;
  spec.seeds = sweep.seeds;
  spec.base = det;
  spec.robustness_total = sweep.robustness_total;
  spec.allow_replacement = sweep.allow_replacement;
  spec.jobs = sweep.jobs;
  return spec;
}

Json PipelineConfig::snapshot() const {
  Json j = Json::object();
  for (const auto& k : config_keys()) j[k.name] = k.get(*this);
  return j;
}

std::string describe_keys() {
  const PipelineConfig defaults;
  std::size_t width = 0;
  for (const auto& k : config_keys()) width = std::max(width, k.name.size());
  std::string out =
      "Config keys (defaults < --config file < --set key=value < SARC_<KEY> env):\n";
  for (const auto& k : config_keys()) {
    std::string value = k.get(defaults);
    if (seed_keys().count(k.name)) value = "derived";
    out += "  " + k.name + std::string(width - k.name.size() + 2, ' ') + k.help + " [" +
           value + "]\n";
  }
  return out;
}

fs::path asset_dir() {
  if (const char* v = std::getenv("SARC_ASSET_DIR")) return fs::path(v);
  return fs::path(SARC_DEFAULT_ASSET_DIR);
}

}  // namespace sarc::pipeline
