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

#include "sarc/nn/tensor.hpp"

#include <unordered_set>

#include "sarc/common/error.hpp"

namespace sarc::nn {

namespace {
thread_local bool g_grad_enabled = true;
}

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

Matrix& Node::grad_buffer() {
  if (grad.rows() != value.rows() || grad.cols() != value.cols()) {
    grad = Matrix(value.rows(), value.cols());
  }
  return grad;
}

Tensor Tensor::constant(Matrix value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  return Tensor(std::move(n));
}

Tensor Tensor::parameter(Matrix value) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = true;
  return Tensor(std::move(n));
}

const Matrix& Tensor::grad() const { return node_->grad_buffer(); }

void Tensor::zero_grad() {
  if (node_->grad.size() == node_->value.size()) node_->grad.fill(0.0);
}

double Tensor::item() const {
  if (size() != 1) throw state_error("item() on a non-scalar tensor");
  return node_->value[0];
}

Tensor Tensor::make(Matrix value, std::vector<Tensor> parents,
                    std::function<void(Node& self)> backward) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  if (!g_grad_enabled) return Tensor(std::move(n));
  for (auto& p : parents) {
    if (p.defined() && p.requires_grad()) n->parents.push_back(p.node_);
  }
  if (n->parents.empty()) return Tensor(std::move(n));
  n->requires_grad = true;
  Node* self = n.get();
  n->backward = [self, fn = std::move(backward)]() { fn(*self); };
  return Tensor(std::move(n));
}

void Tensor::backward() const {
  if (size() != 1) throw state_error("backward() requires a scalar tensor");
  if (!requires_grad()) return;

  // Iterative post-order DFS for a topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> seen;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      Node* p = node->parents[idx++].get();
      if (seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  node_->grad_buffer()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward && n->grad.size() == n->value.size()) n->backward();
  }
  // Interior gradients are scratch; only leaves keep theirs.
  for (Node* n : order) {
    if (n->backward) n->grad = Matrix();
  }
}

}  // namespace sarc::nn
