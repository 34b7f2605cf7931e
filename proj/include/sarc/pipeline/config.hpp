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
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sarc/augment/augmenter.hpp"
#include "sarc/behavior/model.hpp"
#include "sarc/common/jsonl.hpp"
#include "sarc/corpus/split.hpp"
#include "sarc/detector/fusion.hpp"
#include "sarc/gan/trainer.hpp"
#include "sarc/harness/sweep.hpp"

namespace sarc::pipeline {

struct CorpusSection {
  std::filesystem::path path;  // seed corpus
  int min_freq = 1;
  corpus::SplitRatios split;
};

struct GanSection {
  gan::GanConfig model;
  gan::TrainSchedule schedule;
  // Records to generate, half per label; 0 means as many as the seed corpus.
  std::size_t generate = 0;
};

struct AugmentSection {
  augment::AugmentConfig config;
  std::string client = "mock";  // mock | remote
  std::filesystem::path lexicon;  // empty: bundled lexicon
  std::filesystem::path prompt;   // empty: bundled template
};

struct SweepSection {
  harness::SweepKind kind = harness::SweepKind::kNoise;
  std::vector<std::string> grid;  // empty: default grid for the kind
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::size_t jobs = 1;
  std::size_t robustness_total = 0;
  bool allow_replacement = true;
};

struct PipelineConfig {
  std::uint64_t seed = 1;
  std::filesystem::path run_dir = "run";
  CorpusSection corpus;
  GanSection gan;
  AugmentSection augment;
  behavior::BehaviorGanConfig behavior;
  detector::DetectorConfig det;
  std::string det_drop = "none";  // features removed from det.feature_mask
  SweepSection sweep;

  // Runs every module's own checks; throws config_error naming the key.
  void validate() const;
  // Flat key -> value, in registry order.
  Json snapshot() const;
  harness::SweepSpec sweep_spec() const;
};

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&)> set;
};

// Every settable key, in display order.
const std::vector<ConfigKey>& config_keys();

// "gan.lambda_gp" -> "SARC_GAN_LAMBDA_GP".
std::string env_name(const std::string& key);

struct ConfigSources {
  std::optional<std::filesystem::path> file;            // JSON, nested or dotted
  std::vector<std::pair<std::string, std::string>> flags;  // key=value overrides
  // Lookup for environment overrides; defaults to getenv.
  std::function<std::optional<std::string>(const std::string&)> env;
};

// defaults < file < flags < env. Module seeds left unset anywhere are
// derived from the global seed by module name. Unknown keys and bad values
// are config errors; the result is validated.
PipelineConfig load_config(const ConfigSources& sources);

// Parses "key=value".
std::pair<std::string, std::string> parse_assignment(const std::string& s);

// Help text listing every key with its default.
std::string describe_keys();

// Directory holding bundled assets (lexicon, prompt templates).
std::filesystem::path asset_dir();

}  // namespace sarc::pipeline
