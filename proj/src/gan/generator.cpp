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

#include "sarc/gan/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sarc/common/error.hpp"

namespace sarc::gan {

using nn::Matrix;
using nn::Tensor;
using corpus::Vocab;

Generator::Generator(const GeneratorConfig& config, std::uint64_t seed)
    : config_(config) {
  if (config_.vocab_size <= Vocab::kReserved) {
    throw config_error("generator vocabulary too small");
  }
  Rng rng = Rng::substream(seed, "gan.generator.init");
  const std::size_t d = config_.d_model;
  proj_ = nn::Linear(params_, "gen.proj", config_.noise_dim + config_.cond_dim,
                     d, rng);
  embed_ = params_.add("gen.embed",
                       nn::normal_init(config_.vocab_size, d,
                                       1.0 / std::sqrt(static_cast<double>(d)), rng));
  for (std::size_t l = 0; l < config_.layers; ++l) {
    layers_.emplace_back(params_, "gen.layer" + std::to_string(l), d,
                         config_.heads, config_.ffn_hidden, rng);
  }
  out_ = nn::Linear(params_, "gen.out", d, config_.vocab_size, rng);
}

Tensor Generator::project_memory(const Tensor& z, const Tensor& f) const {
  if (z.cols() != config_.noise_dim || f.cols() != config_.cond_dim ||
      z.rows() != f.rows()) {
    throw data_error("project_memory: expected z[n," +
                     std::to_string(config_.noise_dim) + "] and f[n," +
                     std::to_string(config_.cond_dim) + "]");
  }
  return nn::relu(proj_(nn::concat_cols({z, f})));
}

Tensor Generator::logits(const std::vector<int>& input_ids, std::size_t batch,
                         std::size_t steps, const Tensor& memory) const {
  if (input_ids.size() != batch * steps) throw data_error("logits: id count");
  if (memory.rows() != batch || memory.cols() != config_.d_model) {
    throw data_error("logits: memory shape");
  }
  const Matrix pe = nn::sinusoidal_positions(steps, config_.d_model);
  Matrix tiled(batch * steps, config_.d_model);
  for (std::size_t s = 0; s < batch; ++s) {
    std::copy(pe.data(), pe.data() + pe.size(),
              tiled.data() + s * steps * config_.d_model);
  }
  Tensor h = nn::add(nn::embedding(embed_, input_ids),
                     Tensor::constant(std::move(tiled)));
  for (const auto& layer : layers_) h = layer(h, memory, batch, steps, 1);
  return out_(h);
}

std::vector<GeneratedSequence> Generator::generate(const Matrix& z,
                                                   const Matrix& f,
                                                   std::size_t t_max,
                                                   DecodeMode mode,
                                                   std::uint64_t seed) const {
  if (t_max < 3) throw config_error("t_max must be at least 3");
  if (z.rows() != f.rows()) throw data_error("generate: z and f batch differ");
  nn::NoGradGuard no_grad;
  const std::size_t batch = z.rows();
  const std::size_t vocab = config_.vocab_size;
  const Tensor memory =
      project_memory(Tensor::constant(z), Tensor::constant(f));

  std::vector<std::vector<int>> tokens(batch, std::vector<int>{Vocab::kSos});
  std::vector<GeneratedSequence> out(batch);
  std::vector<bool> open(batch, true);
  std::vector<Rng> streams;
  streams.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    streams.push_back(Rng::substream(seed, "gan.sample." + std::to_string(i)));
  }

  // Causal attention makes earlier rows independent of later tokens, so
  // re-running the prefix gives exactly the teacher-forced distributions.
  for (std::size_t t = 1; t < t_max; ++t) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < batch; ++i) {
      if (open[i]) live.push_back(i);
    }
    if (live.empty()) break;
    std::vector<int> ids;
    Matrix mem(live.size(), config_.d_model);
    for (std::size_t r = 0; r < live.size(); ++r) {
      ids.insert(ids.end(), tokens[live[r]].begin(), tokens[live[r]].end());
      auto src = memory.value().row(live[r]);
      std::copy(src.begin(), src.end(), mem.row(r).begin());
    }
    const Tensor lg = logits(ids, live.size(), t, Tensor::constant(std::move(mem)));
    for (std::size_t r = 0; r < live.size(); ++r) {
      const std::size_t i = live[r];
      std::vector<double> lp(lg.value().row(r * t + t - 1).begin(),
                             lg.value().row(r * t + t - 1).end());
      nn::log_softmax_inplace(lp);
      int choice = Vocab::kEos;
      if (t + 1 < t_max) {
        if (mode == DecodeMode::kGreedy) {
          double best = -std::numeric_limits<double>::infinity();
          for (std::size_t v = Vocab::kEos; v < vocab; ++v) {
            if (lp[v] > best) {
              best = lp[v];
              choice = static_cast<int>(v);
            }
          }
        } else {
          double mass = 0.0;
          for (std::size_t v = Vocab::kEos; v < vocab; ++v) mass += std::exp(lp[v]);
          double u = streams[i].uniform() * mass;
          for (std::size_t v = Vocab::kEos; v < vocab; ++v) {
            choice = static_cast<int>(v);
            u -= std::exp(lp[v]);
            if (u < 0.0) break;
          }
        }
      }
      tokens[i].push_back(choice);
      out[i].log_probs.push_back(std::move(lp));
      if (choice == Vocab::kEos) open[i] = false;
    }
  }

  for (std::size_t i = 0; i < batch; ++i) {
    auto& seq = out[i].sequence;
    seq.length = tokens[i].size();
    seq.ids = tokens[i];
    seq.ids.resize(t_max, Vocab::kPad);
    seq.mask.assign(t_max, false);
    std::fill(seq.mask.begin(), seq.mask.begin() + seq.length, true);
  }
  return out;
}

Tensor Generator::soft_sequence(const std::vector<corpus::TokenSequence>& seqs,
                                const Tensor& memory) const {
  if (seqs.empty()) throw data_error("soft_sequence: empty batch");
  const std::size_t batch = seqs.size();
  const std::size_t steps = seqs.front().t_max();
  const std::size_t vocab = config_.vocab_size;
  std::vector<int> inputs;
  inputs.reserve(batch * (steps - 1));
  for (const auto& s : seqs) {
    if (s.t_max() != steps) throw data_error("soft_sequence: ragged batch");
    inputs.insert(inputs.end(), s.ids.begin(), s.ids.end() - 1);
  }
  const Tensor probs =
      nn::softmax_rows(logits(inputs, batch, steps - 1, memory));

  // Row map: source row in `probs` for each output row, -1 for a fixed
  // one-hot (SOS at t=0, PAD past the sequence end).
  std::vector<long> src(batch * steps, -1);
  Matrix value(batch * steps, vocab);
  for (std::size_t s = 0; s < batch; ++s) {
    for (std::size_t t = 0; t < steps; ++t) {
      const std::size_t row = s * steps + t;
      if (t == 0) {
        value(row, Vocab::kSos) = 1.0;
      } else if (t < seqs[s].length) {
        src[row] = static_cast<long>(s * (steps - 1) + t - 1);
        auto p = probs.value().row(src[row]);
        std::copy(p.begin(), p.end(), value.row(row).begin());
      } else {
        value(row, Vocab::kPad) = 1.0;
      }
    }
  }
  return Tensor::make(std::move(value), {probs},
                      [probs, src = std::move(src)](nn::Node& self) {
                        Matrix& g = probs.node()->grad_buffer();
                        for (std::size_t r = 0; r < src.size(); ++r) {
                          if (src[r] < 0) continue;
                          auto from = self.grad.row(r);
                          auto to = g.row(static_cast<std::size_t>(src[r]));
                          for (std::size_t j = 0; j < from.size(); ++j) to[j] += from[j];
                        }
                      });
}

Matrix sample_noise(std::size_t batch, std::size_t dim, Rng& rng) {
  Matrix z(batch, dim);
  for (auto& v : z.values()) v = rng.normal();
  return z;
}

}  // namespace sarc::gan
