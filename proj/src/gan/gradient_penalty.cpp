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

#include "sarc/gan/gradient_penalty.hpp"

#include <cmath>
#include <limits>

#include "sarc/common/error.hpp"
#include "sarc/kernels/kernels.hpp"

namespace sarc::gan {

using nn::Matrix;
using nn::Tensor;

std::vector<double> interpolation_coefficients(std::size_t n, Rng& rng) {
  std::vector<double> eps(n);
  for (auto& e : eps) e = rng.uniform();
  return eps;
}

Matrix interpolate(const Matrix& real, const Matrix& fake,
                   const std::vector<double>& eps, std::size_t steps) {
  if (!real.same_shape(fake)) throw data_error("interpolate: shape mismatch");
  if (real.rows() != eps.size() * steps) throw data_error("interpolate: batch mismatch");
  Matrix out(real.rows(), real.cols());
  for (std::size_t r = 0; r < real.rows(); ++r) {
    const double e = eps[r / steps];
    for (std::size_t c = 0; c < real.cols(); ++c) {
      out(r, c) = e * real(r, c) + (1.0 - e) * fake(r, c);
    }
  }
  return out;
}

double gradient_penalty(const InputGradient& grad, const Matrix& real,
                        const Matrix& fake, const std::vector<double>& eps) {
  if (!real.same_shape(fake) || real.rows() != eps.size() || eps.empty()) {
    throw data_error("gradient_penalty: real, fake and eps must agree");
  }
  const Matrix x_hat = interpolate(real, fake, eps, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < x_hat.rows(); ++i) {
    const auto row = x_hat.row(i);
    const std::vector<double> g = grad(std::vector<double>(row.begin(), row.end()));
    double sq = 0.0;
    for (double v : g) sq += v * v;
    const double d = std::sqrt(sq) - 1.0;
    total += d * d;
  }
  return total / static_cast<double>(x_hat.rows());
}

namespace {

// Active window start per (kernel, sample, channel); -1 when ReLU clamped
// the pooled value, which makes that channel's gradient zero.
struct ActiveWindows {
  std::vector<std::vector<int>> start;
};

ActiveWindows find_windows(const Critic& critic, const Matrix& x_emb,
                           const Matrix& f, std::size_t batch,
                           std::size_t steps) {
  const auto& cfg = critic.config();
  if (x_emb.rows() != batch * steps || x_emb.cols() != cfg.embed_dim ||
      f.rows() != batch || f.cols() != cfg.cond_dim) {
    throw data_error("critic gradient: input shape mismatch");
  }
  const std::size_t width = cfg.embed_dim + cfg.cond_dim;
  Matrix x(batch * steps, width);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto dst = x.row(r);
    auto e = x_emb.row(r);
    auto c = f.row(r / steps);
    std::copy(e.begin(), e.end(), dst.begin());
    std::copy(c.begin(), c.end(), dst.begin() + static_cast<long>(cfg.embed_dim));
  }
  const auto& cnn = critic.cnn();
  const auto& kt = kernels::active();
  const std::size_t channels = cfg.channels;
  ActiveWindows aw;
  for (std::size_t ki = 0; ki < cnn.kernel_sizes.size(); ++ki) {
    const std::size_t k = cnn.kernel_sizes[ki];
    if (steps < k) throw data_error("critic gradient: sequence shorter than kernel");
    const std::size_t positions = steps - k + 1;
    const Matrix& w = cnn.weights[ki].value();
    const Matrix& b = cnn.biases[ki].value();
    std::vector<int> start(batch * channels, -1);
    Matrix y(positions, channels);
    for (std::size_t s = 0; s < batch; ++s) {
      y.fill(0.0);
      kt.gemm_nn(positions, channels, k * width, x.data() + s * steps * width,
                 width, w.data(), channels, y.data(), channels);
      for (std::size_t c = 0; c < channels; ++c) {
        double best = -std::numeric_limits<double>::infinity();
        int best_t = 0;
        for (std::size_t t = 0; t < positions; ++t) {
          const double v = y(t, c) + b[c];
          if (v > best) {
            best = v;
            best_t = static_cast<int>(t);
          }
        }
        if (best > 0.0) start[s * channels + c] = best_t;
      }
    }
    aw.start.push_back(std::move(start));
  }
  return aw;
}

Matrix input_gradient(const Critic& critic, const ActiveWindows& aw,
                      std::size_t batch, std::size_t steps) {
  const auto& cfg = critic.config();
  const auto& cnn = critic.cnn();
  const std::size_t width = cfg.embed_dim + cfg.cond_dim;
  const std::size_t channels = cfg.channels;
  const Matrix& a = critic.head().w.value();
  Matrix g(batch * steps, cfg.embed_dim);
  for (std::size_t ki = 0; ki < cnn.kernel_sizes.size(); ++ki) {
    const std::size_t k = cnn.kernel_sizes[ki];
    const Matrix& w = cnn.weights[ki].value();
    for (std::size_t s = 0; s < batch; ++s) {
      for (std::size_t c = 0; c < channels; ++c) {
        const int t0 = aw.start[ki][s * channels + c];
        if (t0 < 0) continue;
        const double ac = a(ki * channels + c, 0);
        for (std::size_t j = 0; j < k; ++j) {
          auto grow = g.row(s * steps + static_cast<std::size_t>(t0) + j);
          for (std::size_t col = 0; col < cfg.embed_dim; ++col) {
            grow[col] += ac * w(j * width + col, c);
          }
        }
      }
    }
  }
  return g;
}

}  // namespace

Matrix critic_input_gradient(const Critic& critic, const Matrix& x_emb,
                             const Matrix& f, std::size_t batch,
                             std::size_t steps) {
  return input_gradient(critic, find_windows(critic, x_emb, f, batch, steps),
                        batch, steps);
}

Tensor critic_gradient_penalty(const Critic& critic, const Matrix& x_hat,
                               const Matrix& f, std::size_t batch,
                               std::size_t steps) {
  ActiveWindows aw = find_windows(critic, x_hat, f, batch, steps);
  Matrix g = input_gradient(critic, aw, batch, steps);
  const std::size_t e = critic.config().embed_dim;
  std::vector<double> norms(batch);
  double total = 0.0;
  for (std::size_t s = 0; s < batch; ++s) {
    double sq = 0.0;
    for (std::size_t r = s * steps; r < (s + 1) * steps; ++r) {
      for (double v : g.row(r)) sq += v * v;
    }
    norms[s] = std::sqrt(sq);
    total += (norms[s] - 1.0) * (norms[s] - 1.0);
  }
  Matrix value(1, 1, total / static_cast<double>(batch));

  std::vector<Tensor> parents = critic.cnn().weights;
  parents.push_back(critic.head().w);
  const auto& cnn = critic.cnn();
  return Tensor::make(
      std::move(value), parents,
      [weights = cnn.weights, kernel_sizes = cnn.kernel_sizes,
       head = critic.head().w, aw = std::move(aw), g = std::move(g),
       norms = std::move(norms), batch, steps, e,
       channels = critic.config().channels](nn::Node& self) {
        const double upstream = self.grad[0];
        const std::size_t width = weights.front().rows() / kernel_sizes.front();
        const Matrix& a = head.value();
        // dGP/dg for each sample, folded into a per-sample scale of g.
        std::vector<double> coef(batch, 0.0);
        for (std::size_t s = 0; s < batch; ++s) {
          if (norms[s] > 0.0) {
            coef[s] = upstream * 2.0 * (norms[s] - 1.0) /
                      (norms[s] * static_cast<double>(batch));
          }
        }
        for (std::size_t ki = 0; ki < kernel_sizes.size(); ++ki) {
          const std::size_t k = kernel_sizes[ki];
          const Matrix& w = weights[ki].value();
          for (std::size_t s = 0; s < batch; ++s) {
            if (coef[s] == 0.0) continue;
            for (std::size_t c = 0; c < channels; ++c) {
              const int t0 = aw.start[ki][s * channels + c];
              if (t0 < 0) continue;
              const double ac = a(ki * channels + c, 0);
              double da = 0.0;
              for (std::size_t j = 0; j < k; ++j) {
                auto grow = g.row(s * steps + static_cast<std::size_t>(t0) + j);
                for (std::size_t col = 0; col < e; ++col) {
                  const double gs = coef[s] * grow[col];
                  da += gs * w(j * width + col, c);
                  if (weights[ki].requires_grad()) {
                    weights[ki].node()->grad_buffer()(j * width + col, c) += ac * gs;
                  }
                }
              }
              if (head.requires_grad()) {
                head.node()->grad_buffer()(ki * channels + c, 0) += da;
              }
            }
          }
        }
      });
}

}  // namespace sarc::gan
