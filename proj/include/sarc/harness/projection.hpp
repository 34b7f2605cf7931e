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
#include <string>
#include <vector>

#include "sarc/nn/matrix.hpp"

namespace sarc::harness {

struct EmbeddingTable {
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<double> probs;
  nn::Matrix vectors;  // one row per record
};

// Parses the detector's embedding export; errors carry the 1-based line.
EmbeddingTable read_embeddings(const std::filesystem::path& path);

struct TsneConfig {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  std::uint64_t seed = 1;
};

// Exact t-SNE to two dimensions. Identical input rows share one output
// point. Returns [n, 2].
nn::Matrix tsne_2d(const nn::Matrix& x, const TsneConfig& config);

// Reads an embedding file and writes `id,label,x,y` rows (plus an SVG
// scatter when `svg_path` is non-empty).
void project_2d(const std::filesystem::path& embeddings, const std::filesystem::path& out,
                const TsneConfig& config, const std::filesystem::path& svg_path = {});

// Mean silhouette coefficient of a labelled point set.
double silhouette(const nn::Matrix& points, const std::vector<int>& labels);

}  // namespace sarc::harness
