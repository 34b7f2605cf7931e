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
#include <string>
#include <vector>

#include "sarc/corpus/split.hpp"
#include "sarc/detector/fusion.hpp"
#include "sarc/harness/metrics.hpp"

namespace sarc::harness {

enum class SweepKind { kNoise, kRobustness, kSize, kAblation };

std::string sweep_kind_name(SweepKind k);
SweepKind parse_sweep_kind(const std::string& s);

struct SweepSpec {
  SweepKind kind = SweepKind::kNoise;
  // Noise probabilities, sarcastic proportions, training sizes, or dropped
  // feature sets ("none", "SR", "CC+TD").
  std::vector<std::string> grid;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  detector::DetectorConfig base;
  std::size_t robustness_total = 0;  // 0: training split size
  bool allow_replacement = true;
  std::size_t jobs = 1;

  void validate() const;
};

// Default grids: noise 0.05..0.45, robustness 0.1..0.9, size 5000..20000,
// ablation none + each single feature.
std::vector<std::string> default_grid(SweepKind kind);

struct SweepRow {
  std::string sweep;
  std::string point;
  std::uint64_t seed = 0;
  MetricsReport metrics;

  std::string csv() const;
};

std::string sweep_csv_header();

// Exactly round(proportion * total) sarcastic records. Draws without
// replacement and tops up with replacement only when a class runs out
// (logged); with allow_replacement = false a shortfall is an error.
std::vector<corpus::CommentRecord> resample_to_proportion(
    const std::vector<corpus::CommentRecord>& records, double proportion, std::size_t total,
    std::uint64_t seed, bool allow_replacement = true);

// Seeded subsample without replacement.
std::vector<corpus::CommentRecord> subsample(const std::vector<corpus::CommentRecord>& records,
                                             std::size_t size, std::uint64_t seed);

// Training set for one grid point.
std::vector<corpus::CommentRecord> sweep_training_set(const SweepSpec& spec,
                                                      const std::string& point,
                                                      const std::vector<corpus::CommentRecord>& train,
                                                      std::uint64_t seed);

using SweepProgress = std::function<void(const SweepRow&)>;

// Trains and evaluates each (point, seed) on the untouched test split.
// Rows are appended to out_dir/results.csv; (sweep, point, seed) rows that
// are already present are kept and not recomputed. Writes out_dir/<kind>.svg
// from every row of this sweep kind in the table.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const corpus::DatasetSplit& data,
                                const std::filesystem::path& out_dir,
                                const SweepProgress& progress = {});

std::vector<SweepRow> read_sweep_table(const std::filesystem::path& path);

// Mean sarcastic F1 per point, in grid order.
std::vector<std::pair<std::string, double>> mean_f1_by_point(const std::vector<SweepRow>& rows,
                                                             const std::string& sweep);

}  // namespace sarc::harness
