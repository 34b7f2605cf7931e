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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sarc/common/rng.hpp"
#include "sarc/nn/tensor.hpp"

namespace sarc::nn {

// Ordered registry of trainable leaves keyed by layer name. Checkpoint blobs
// are written and read by name; load() requires matching names and shapes.
class ParamStore {
 public:
  Tensor add(const std::string& name, Matrix init);
  Tensor get(const std::string& name) const;
  bool contains(const std::string& name) const;

  const std::vector<std::pair<std::string, Tensor>>& items() const {
    return items_;
  }
  std::vector<Tensor> tensors() const;
  std::size_t scalar_count() const;
  void zero_grad();
  bool grads_finite() const;

  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);
  // Copies values from a store with identical layout.
  void copy_values_from(const ParamStore& other);

 private:
  std::vector<std::pair<std::string, Tensor>> items_;
};

// Glorot-uniform fill for a [fan_in, fan_out] weight.
Matrix glorot(std::size_t fan_in, std::size_t fan_out, Rng& rng);
Matrix normal_init(std::size_t rows, std::size_t cols, double stddev, Rng& rng);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Global L2 clip on the concatenated gradient; 0 disables.
  double clip_norm = 0.0;
};

class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamConfig config);
  void step();
  void zero_grad();
  const AdamConfig& config() const { return config_; }
  void set_lr(double lr) { config_.lr = lr; }
  long steps() const { return t_; }

 private:
  std::vector<Tensor> params_;
  AdamConfig config_;
  std::vector<Matrix> m_, v_;
  long t_ = 0;
};

}  // namespace sarc::nn
