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

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "sarc/nn/matrix.hpp"

namespace sarc::nn {

struct Node {
  Matrix value;
  Matrix grad;  // allocated on first accumulation
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void()> backward;

  Matrix& grad_buffer();
};

// Handle to a node in a dynamically built computation graph. Copies share
// the node. Leaves created with `parameter` accumulate gradients across
// backward() calls until zero_grad().
class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(Matrix value);
  static Tensor parameter(Matrix value);
  static Tensor zeros(std::size_t rows, std::size_t cols) {
    return constant(Matrix(rows, cols));
  }

  bool defined() const { return node_ != nullptr; }
  std::size_t rows() const { return node_->value.rows(); }
  std::size_t cols() const { return node_->value.cols(); }
  std::size_t size() const { return node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }

  const Matrix& value() const { return node_->value; }
  Matrix& mutable_value() { return node_->value; }
  // Zero matrix of the right shape when no gradient reached this node.
  const Matrix& grad() const;
  void zero_grad();
  double item() const;

  // Reverse-mode sweep from a 1x1 tensor.
  void backward() const;

  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& shared() const { return node_; }

  // Builds a result node. `parents` that do not require grad are dropped;
  // when none remain (or grad mode is off) the backward closure is discarded.
  static Tensor make(Matrix value, std::vector<Tensor> parents,
                     std::function<void(Node& self)> backward);

 private:
  explicit Tensor(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  std::shared_ptr<Node> node_;
};

bool grad_enabled();

// Disables graph construction in scope (inference, frozen snapshots).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace sarc::nn
