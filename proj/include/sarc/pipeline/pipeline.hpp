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

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sarc/augment/augmenter.hpp"
#include "sarc/augment/client.hpp"
#include "sarc/behavior/trainer.hpp"
#include "sarc/detector/trainer.hpp"
#include "sarc/gan/trainer.hpp"
#include "sarc/harness/metrics.hpp"
#include "sarc/pipeline/config.hpp"

namespace sarc::pipeline {

inline constexpr std::array<const char*, 6> kStageNames = {
    "generate", "augment", "synthesize_behaviors", "split", "train_detector", "evaluate"};

// Exclusive claim on a run directory, held for the object's lifetime. A lock
// left by a process that no longer exists is taken over with a warning.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& run_dir);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
};

struct RunOptions {
  // Stop after this stage; later stages keep their previous manifest state.
  std::optional<std::string> until;
};

struct StageOutcome {
  std::string name;
  bool reused = false;
  double seconds = 0.0;
};

struct RunResult {
  std::vector<StageOutcome> stages;
  std::optional<harness::MetricsReport> metrics;  // set once evaluate has run
};

// Runs the six stages in order under config.run_dir. A stage whose recorded
// fingerprint (config section plus input hashes) and output hashes still
// match is reused instead of re-executed. A failing stage is marked in the
// manifest and rethrown with its name.
RunResult run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

std::filesystem::path manifest_path(const std::filesystem::path& run_dir);
Json read_manifest(const std::filesystem::path& run_dir);

// Report table: one header row and one row per model.
std::string evaluation_report(const std::vector<std::pair<std::string, harness::MetricsReport>>& rows);

// Balanced (label, topic, hierarchy, context) conditions drawn from the seed
// corpus: even indices sarcastic, odd non-sarcastic.
std::vector<corpus::CommentRecord> generation_conditions(
    const std::vector<corpus::CommentRecord>& seed_corpus, std::size_t n, std::uint64_t seed);

// Steps shared by the pipeline stages and the single-step commands. Each
// writes its directory beside the target and swaps it in when complete.

// Builds the vocabulary, pretrains and trains adversarially; writes the
// checkpoint, vocab.txt and losses.csv.
std::unique_ptr<gan::GanModel> train_gan_into(const PipelineConfig& config,
                                              const std::vector<corpus::CommentRecord>& records,
                                              const std::filesystem::path& out_dir);

// Mock client over the configured (or bundled) lexicon, or the remote
// client with its audit log under audit_dir.
std::unique_ptr<augment::ReplacementClient> make_replacement_client(
    const PipelineConfig& config, const std::filesystem::path& audit_dir);

augment::AugmentResult augment_into(const PipelineConfig& config,
                                    const std::vector<corpus::CommentRecord>& records,
                                    const std::filesystem::path& out_file,
                                    const std::filesystem::path& skips_file,
                                    const std::filesystem::path& audit_dir);

// Content encoder taken from the GAN classifier's embedding table.
std::unique_ptr<behavior::BehaviorModel> train_behavior_into(
    const PipelineConfig& config, const std::vector<corpus::CommentRecord>& records,
    const std::filesystem::path& gan_dir, const std::filesystem::path& out_dir);

detector::TrainHistory train_detector_into(const PipelineConfig& config,
                                           const std::vector<corpus::CommentRecord>& train,
                                           const std::vector<corpus::CommentRecord>& val,
                                           const std::filesystem::path& out_dir);

// report.md (report table), report.json and predictions.jsonl.
harness::MetricsReport evaluate_into(const detector::Detector& detector,
                                     const std::vector<corpus::CommentRecord>& test,
                                     const std::filesystem::path& out_dir,
                                     const std::string& note = {});

}  // namespace sarc::pipeline
