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

#include "sarc/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sarc/common/error.hpp"
#include "sarc/kernels/kernels.hpp"

namespace sarc::nn {

namespace {

std::string shape_str(const Tensor& t) {
  return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw data_error(std::string(op) + ": shape mismatch " + shape_str(a) +
                     " vs " + shape_str(b));
  }
}

Matrix& gbuf(const Tensor& t) { return t.node()->grad_buffer(); }

void accumulate(const Tensor& t, const Matrix& g) {
  if (!t.requires_grad()) return;
  Matrix& dst = gbuf(t);
  kernels::active().axpy(1.0, g.data(), dst.data(), g.size());
}

// Applies f elementwise; df(x, y) is the local derivative given input and output.
template <typename F, typename DF>
Tensor unary(const Tensor& a, F f, DF df) {
  Matrix out(a.rows(), a.cols());
  const Matrix& av = a.value();
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = f(av[i]);
  return Tensor::make(std::move(out), {a}, [a, df](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& ga = gbuf(a);
    const Matrix& av = a.value();
    for (std::size_t i = 0; i < av.size(); ++i) {
      ga[i] += self.grad[i] * df(av[i], self.value[i]);
    }
  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw data_error("matmul: shape mismatch " + shape_str(a) + " * " +
                     shape_str(b));
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix out(m, n);
  kernels::active().gemm_nn(m, n, k, a.value().data(), k, b.value().data(), n,
                            out.data(), n);
  return Tensor::make(std::move(out), {a, b}, [a, b, m, k, n](Node& self) {
    const auto& kt = kernels::active();
    if (a.requires_grad()) {
      kt.gemm_nt(m, k, n, self.grad.data(), n, b.value().data(), n,
                 gbuf(a).data(), k);
    }
    if (b.requires_grad()) {
      kt.gemm_tn(k, n, m, a.value().data(), k, self.grad.data(), n,
                 gbuf(b).data(), n);
    }
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Matrix out = a.value();
  kernels::active().axpy(1.0, b.value().data(), out.data(), out.size());
  return Tensor::make(std::move(out), {a, b}, [a, b](Node& self) {
    accumulate(a, self.grad);
    accumulate(b, self.grad);
  });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  Matrix out = a.value();
  kernels::active().axpy(-1.0, b.value().data(), out.data(), out.size());
  return Tensor::make(std::move(out), {a, b}, [a, b](Node& self) {
    accumulate(a, self.grad);
    if (b.requires_grad()) {
      kernels::active().axpy(-1.0, self.grad.data(), gbuf(b).data(),
                             self.grad.size());
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] * b.value()[i];
  return Tensor::make(std::move(out), {a, b}, [a, b](Node& self) {
    if (a.requires_grad()) {
      Matrix& g = gbuf(a);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * b.value()[i];
    }
    if (b.requires_grad()) {
      Matrix& g = gbuf(b);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * a.value()[i];
    }
  });
}

Tensor scale(const Tensor& a, double s) {
  Matrix out = a.value();
  for (double& v : out.values()) v *= s;
  return Tensor::make(std::move(out), {a}, [a, s](Node& self) {
    if (a.requires_grad()) {
      kernels::active().axpy(s, self.grad.data(), gbuf(a).data(), self.grad.size());
    }
  });
}

Tensor add_scalar(const Tensor& a, double s) {
  Matrix out = a.value();
  for (double& v : out.values()) v += s;
  return Tensor::make(std::move(out), {a},
                      [a](Node& self) { accumulate(a, self.grad); });
}

Tensor add_row(const Tensor& a, const Tensor& bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols()) {
    throw data_error("add_row: bias " + shape_str(bias) + " vs input " +
                     shape_str(a));
  }
  Matrix out = a.value();
  const std::size_t n = a.cols();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    kernels::active().axpy(1.0, bias.value().data(), out.data() + r * n, n);
  }
  return Tensor::make(std::move(out), {a, bias}, [a, bias, n](Node& self) {
    accumulate(a, self.grad);
    if (bias.requires_grad()) {
      Matrix& gb = gbuf(bias);
      for (std::size_t r = 0; r < self.grad.rows(); ++r) {
        kernels::active().axpy(1.0, self.grad.data() + r * n, gb.data(), n);
      }
    }
  });
}

Tensor mul_row_const(const Tensor& a, const std::vector<double>& mask) {
  if (mask.size() != a.cols()) throw data_error("mul_row_const: width mismatch");
  Matrix out = a.value();
  const std::size_t n = a.cols();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) out(r, c) *= mask[c];
  }
  return Tensor::make(std::move(out), {a}, [a, mask, n](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& g = gbuf(a);
    for (std::size_t r = 0; r < g.rows(); ++r) {
      for (std::size_t c = 0; c < n; ++c) g(r, c) += self.grad(r, c) * mask[c];
    }
  });
}

Tensor relu(const Tensor& a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor log_softmax_rows(const Tensor& a) {
  Matrix out = a.value();
  for (std::size_t r = 0; r < out.rows(); ++r) log_softmax_inplace(out.row(r));
  return Tensor::make(std::move(out), {a}, [a](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& ga = gbuf(a);
    const std::size_t n = self.value.cols();
    for (std::size_t r = 0; r < self.value.rows(); ++r) {
      double gsum = 0.0;
      for (std::size_t c = 0; c < n; ++c) gsum += self.grad(r, c);
      for (std::size_t c = 0; c < n; ++c) {
        ga(r, c) += self.grad(r, c) - std::exp(self.value(r, c)) * gsum;
      }
    }
  });
}

Tensor softmax_rows(const Tensor& a) {
  Matrix out = a.value();
  for (std::size_t r = 0; r < out.rows(); ++r) softmax_inplace(out.row(r));
  return Tensor::make(std::move(out), {a}, [a](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& ga = gbuf(a);
    const std::size_t n = self.value.cols();
    for (std::size_t r = 0; r < self.value.rows(); ++r) {
      const double dotv = kernels::active().dot(self.grad.data() + r * n,
                                                self.value.data() + r * n, n);
      for (std::size_t c = 0; c < n; ++c) {
        ga(r, c) += self.value(r, c) * (self.grad(r, c) - dotv);
      }
    }
  });
}

Tensor layer_norm_rows(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                       double eps) {
  const std::size_t m = x.rows(), n = x.cols();
  if (gamma.rows() != 1 || gamma.cols() != n || beta.rows() != 1 ||
      beta.cols() != n) {
    throw data_error("layer_norm: parameter width mismatch");
  }
  Matrix xhat(m, n);
  std::vector<double> inv_std(m);
  Matrix out(m, n);
  for (std::size_t r = 0; r < m; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n; ++c) mean += x.value()(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      const double d = x.value()(r, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < n; ++c) {
      xhat(r, c) = (x.value()(r, c) - mean) * inv_std[r];
      out(r, c) = gamma.value()[c] * xhat(r, c) + beta.value()[c];
    }
  }
  return Tensor::make(
      std::move(out), {x, gamma, beta},
      [x, gamma, beta, xhat = std::move(xhat), inv_std = std::move(inv_std), m,
       n](Node& self) {
        const Matrix& dy = self.grad;
        if (gamma.requires_grad()) {
          Matrix& gg = gbuf(gamma);
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < n; ++c) gg[c] += dy(r, c) * xhat(r, c);
        }
        if (beta.requires_grad()) {
          Matrix& gb = gbuf(beta);
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < n; ++c) gb[c] += dy(r, c);
        }
        if (x.requires_grad()) {
          Matrix& gx = gbuf(x);
          const double inv_n = 1.0 / static_cast<double>(n);
          for (std::size_t r = 0; r < m; ++r) {
            double mean_d = 0.0, mean_dx = 0.0;
            for (std::size_t c = 0; c < n; ++c) {
              const double d = dy(r, c) * gamma.value()[c];
              mean_d += d;
              mean_dx += d * xhat(r, c);
            }
            mean_d *= inv_n;
            mean_dx *= inv_n;
            for (std::size_t c = 0; c < n; ++c) {
              const double d = dy(r, c) * gamma.value()[c];
              gx(r, c) += inv_std[r] * (d - mean_d - xhat(r, c) * mean_dx);
            }
          }
        }
      });
}

Tensor embedding(const Tensor& table, const std::vector<int>& ids) {
  const std::size_t n = table.cols();
  Matrix out(ids.size(), n);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= table.rows()) {
      throw data_error("embedding: id " + std::to_string(ids[i]) +
                       " out of range " + std::to_string(table.rows()));
    }
    std::copy_n(table.value().data() + ids[i] * n, n, out.data() + i * n);
  }
  return Tensor::make(std::move(out), {table}, [table, ids, n](Node& self) {
    if (!table.requires_grad()) return;
    Matrix& g = gbuf(table);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      kernels::active().axpy(1.0, self.grad.data() + i * n,
                             g.data() + ids[i] * n, n);
    }
  });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw data_error("concat_cols: no inputs");
  const std::size_t m = parts.front().rows();
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.rows() != m) throw data_error("concat_cols: row mismatch");
    total += p.cols();
  }
  Matrix out(m, total);
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < m; ++r) {
      std::copy_n(p.value().data() + r * p.cols(), p.cols(),
                  out.data() + r * total + off);
    }
    off += p.cols();
  }
  return Tensor::make(std::move(out), parts, [parts, m, total](Node& self) {
    std::size_t off = 0;
    for (const auto& p : parts) {
      if (p.requires_grad()) {
        Matrix& g = gbuf(p);
        for (std::size_t r = 0; r < m; ++r) {
          kernels::active().axpy(1.0, self.grad.data() + r * total + off,
                                 g.data() + r * p.cols(), p.cols());
        }
      }
      off += p.cols();
    }
  });
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw data_error("concat_rows: no inputs");
  const std::size_t n = parts.front().cols();
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.cols() != n) throw data_error("concat_rows: column mismatch");
    total += p.rows();
  }
  Matrix out(total, n);
  std::size_t off = 0;
  for (const auto& p : parts) {
    std::copy_n(p.value().data(), p.size(), out.data() + off * n);
    off += p.rows();
  }
  return Tensor::make(std::move(out), parts, [parts, n](Node& self) {
    std::size_t off = 0;
    for (const auto& p : parts) {
      if (p.requires_grad()) {
        kernels::active().axpy(1.0, self.grad.data() + off * n, gbuf(p).data(),
                               p.size());
      }
      off += p.rows();
    }
  });
}

Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  if (begin > end || end > a.cols()) throw data_error("slice_cols: bad range");
  const std::size_t m = a.rows(), w = end - begin, n = a.cols();
  Matrix out(m, w);
  for (std::size_t r = 0; r < m; ++r) {
    std::copy_n(a.value().data() + r * n + begin, w, out.data() + r * w);
  }
  return Tensor::make(std::move(out), {a}, [a, begin, w, m, n](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& g = gbuf(a);
    for (std::size_t r = 0; r < m; ++r) {
      kernels::active().axpy(1.0, self.grad.data() + r * w,
                             g.data() + r * n + begin, w);
    }
  });
}

Tensor select_rows(const Tensor& a, const std::vector<std::size_t>& rows) {
  const std::size_t n = a.cols();
  Matrix out(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= a.rows()) throw data_error("select_rows: index out of range");
    std::copy_n(a.value().data() + rows[i] * n, n, out.data() + i * n);
  }
  return Tensor::make(std::move(out), {a}, [a, rows, n](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& g = gbuf(a);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      kernels::active().axpy(1.0, self.grad.data() + i * n,
                             g.data() + rows[i] * n, n);
    }
  });
}

Tensor repeat_rows(const Tensor& a, std::size_t times) {
  const std::size_t m = a.rows(), n = a.cols();
  Matrix out(m * times, n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t t = 0; t < times; ++t) {
      std::copy_n(a.value().data() + r * n, n, out.data() + (r * times + t) * n);
    }
  }
  return Tensor::make(std::move(out), {a}, [a, m, n, times](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& g = gbuf(a);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t t = 0; t < times; ++t) {
        kernels::active().axpy(1.0, self.grad.data() + (r * times + t) * n,
                               g.data() + r * n, n);
      }
    }
  });
}

Tensor masked_mean_pool(const Tensor& x, std::size_t batch, std::size_t steps,
                        const std::vector<bool>& mask) {
  if (x.rows() != batch * steps || mask.size() != batch * steps) {
    throw data_error("masked_mean_pool: shape mismatch");
  }
  const std::size_t n = x.cols();
  Matrix out(batch, n);
  std::vector<double> inv_count(batch, 0.0);
  for (std::size_t b = 0; b < batch; ++b) {
    std::size_t count = 0;
    for (std::size_t t = 0; t < steps; ++t) {
      if (!mask[b * steps + t]) continue;
      ++count;
      kernels::active().axpy(1.0, x.value().data() + (b * steps + t) * n,
                             out.data() + b * n, n);
    }
    inv_count[b] = count ? 1.0 / static_cast<double>(count) : 0.0;
    for (std::size_t c = 0; c < n; ++c) out(b, c) *= inv_count[b];
  }
  return Tensor::make(
      std::move(out), {x}, [x, mask, inv_count, batch, steps, n](Node& self) {
        if (!x.requires_grad()) return;
        Matrix& g = gbuf(x);
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t t = 0; t < steps; ++t) {
            if (!mask[b * steps + t]) continue;
            kernels::active().axpy(inv_count[b], self.grad.data() + b * n,
                                   g.data() + (b * steps + t) * n, n);
          }
        }
      });
}

Tensor sum_all(const Tensor& a) {
  double s = 0.0;
  for (double v : a.value().values()) s += v;
  return Tensor::make(Matrix(1, 1, s), {a}, [a](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& g = gbuf(a);
    for (double& v : g.values()) v += self.grad[0];
  });
}

Tensor mean_all(const Tensor& a) {
  if (a.size() == 0) throw data_error("mean_all: empty tensor");
  return scale(sum_all(a), 1.0 / static_cast<double>(a.size()));
}

Tensor pick_sum(const Tensor& a, const std::vector<int>& idx) {
  if (idx.size() != a.rows()) throw data_error("pick_sum: index count mismatch");
  double s = 0.0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (idx[r] < 0) continue;
    if (static_cast<std::size_t>(idx[r]) >= a.cols()) {
      throw data_error("pick_sum: index out of range");
    }
    s += a.value()(r, idx[r]);
  }
  return Tensor::make(Matrix(1, 1, s), {a}, [a, idx](Node& self) {
    if (!a.requires_grad()) return;
    Matrix& g = gbuf(a);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (idx[r] >= 0) g(r, idx[r]) += self.grad[0];
    }
  });
}

Tensor bce_with_logits(const Tensor& logits, const std::vector<double>& targets) {
  if (targets.size() != logits.size()) {
    throw data_error("bce_with_logits: target count mismatch");
  }
  const double n = static_cast<double>(targets.size());
  double s = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double z = logits.value()[i];
    s += std::max(z, 0.0) - z * targets[i] + std::log1p(std::exp(-std::abs(z)));
  }
  return Tensor::make(Matrix(1, 1, s / n), {logits},
                      [logits, targets, n](Node& self) {
                        if (!logits.requires_grad()) return;
                        Matrix& g = gbuf(logits);
                        for (std::size_t i = 0; i < targets.size(); ++i) {
                          const double z = logits.value()[i];
                          const double p = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                                                    : std::exp(z) / (1.0 + std::exp(z));
                          g[i] += self.grad[0] * (p - targets[i]) / n;
                        }
                      });
}

Tensor bce_prob(const Tensor& probs, const std::vector<double>& targets) {
  if (targets.size() != probs.size()) {
    throw data_error("bce_prob: target count mismatch");
  }
  static constexpr double kEps = 1e-12;
  const double n = static_cast<double>(targets.size());
  double s = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double p = std::clamp(probs.value()[i], kEps, 1.0 - kEps);
    const double t = targets[i];
    // 0*log(0) terms are dropped so exact 0/1 probabilities give zero loss.
    if (t > 0.0) s -= t * std::log(p);
    if (t < 1.0) s -= (1.0 - t) * std::log1p(-p);
  }
  return Tensor::make(Matrix(1, 1, s / n), {probs},
                      [probs, targets, n](Node& self) {
                        if (!probs.requires_grad()) return;
                        Matrix& g = gbuf(probs);
                        for (std::size_t i = 0; i < targets.size(); ++i) {
                          const double p =
                              std::clamp(probs.value()[i], kEps, 1.0 - kEps);
                          const double t = targets[i];
                          g[i] += self.grad[0] * (-t / p + (1.0 - t) / (1.0 - p)) / n;
                        }
                      });
}

Tensor attention(const Tensor& q, const Tensor& k, const Tensor& v,
                 std::size_t batch, std::size_t tq, std::size_t tk,
                 std::size_t heads, bool causal,
                 const std::vector<bool>& key_mask) {
  const std::size_t d = q.cols();
  if (k.cols() != d || v.cols() != d || q.rows() != batch * tq ||
      k.rows() != batch * tk || v.rows() != batch * tk) {
    throw data_error("attention: shape mismatch");
  }
  if (heads == 0 || d % heads != 0) {
    throw data_error("attention: width not divisible by heads");
  }
  if (causal && tq != tk) throw data_error("attention: causal needs tq == tk");
  if (!key_mask.empty() && key_mask.size() != batch * tk) {
    throw data_error("attention: key mask size mismatch");
  }
  const std::size_t dh = d / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
  const auto& kt = kernels::active();

  // probs[(b*heads + h)] is a tq x tk block.
  std::vector<double> probs(batch * heads * tq * tk, 0.0);
  Matrix out(batch * tq, d);
  std::vector<double> scores(tq * tk);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t h = 0; h < heads; ++h) {
      std::fill(scores.begin(), scores.end(), 0.0);
      const double* qb = q.value().data() + b * tq * d + h * dh;
      const double* kb = k.value().data() + b * tk * d + h * dh;
      const double* vb = v.value().data() + b * tk * d + h * dh;
      kt.gemm_nt(tq, tk, dh, qb, d, kb, d, scores.data(), tk);
      double* pb = probs.data() + (b * heads + h) * tq * tk;
      for (std::size_t i = 0; i < tq; ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < tk; ++j) {
          const bool ok = (!causal || j <= i) &&
                          (key_mask.empty() || key_mask[b * tk + j]);
          if (ok) {
            scores[i * tk + j] *= inv_sqrt;
            mx = std::max(mx, scores[i * tk + j]);
          } else {
            scores[i * tk + j] = -std::numeric_limits<double>::infinity();
          }
        }
        if (!std::isfinite(mx)) continue;  // fully masked row attends nothing
        double sum = 0.0;
        for (std::size_t j = 0; j < tk; ++j) {
          const double e = std::isfinite(scores[i * tk + j])
                               ? std::exp(scores[i * tk + j] - mx)
                               : 0.0;
          pb[i * tk + j] = e;
          sum += e;
        }
        for (std::size_t j = 0; j < tk; ++j) pb[i * tk + j] /= sum;
      }
      kt.gemm_nn(tq, dh, tk, pb, tk, vb, d, out.data() + b * tq * d + h * dh, d);
    }
  }

  return Tensor::make(
      std::move(out), {q, k, v},
      [q, k, v, probs = std::move(probs), batch, tq, tk, heads, d, dh,
       inv_sqrt](Node& self) {
        const auto& kt = kernels::active();
        std::vector<double> dp(tq * tk);
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t h = 0; h < heads; ++h) {
            const double* pb = probs.data() + (b * heads + h) * tq * tk;
            const double* dob = self.grad.data() + b * tq * d + h * dh;
            const double* qb = q.value().data() + b * tq * d + h * dh;
            const double* kb = k.value().data() + b * tk * d + h * dh;
            const double* vb = v.value().data() + b * tk * d + h * dh;
            if (v.requires_grad()) {
              kt.gemm_tn(tk, dh, tq, pb, tk, dob, d,
                         gbuf(v).data() + b * tk * d + h * dh, d);
            }
            if (!q.requires_grad() && !k.requires_grad()) continue;
            std::fill(dp.begin(), dp.end(), 0.0);
            kt.gemm_nt(tq, tk, dh, dob, d, vb, d, dp.data(), tk);
            // dS = P * (dP - rowsum(dP * P)), folded with the 1/sqrt(dh) scale.
            for (std::size_t i = 0; i < tq; ++i) {
              const double rs = kt.dot(dp.data() + i * tk, pb + i * tk, tk);
              for (std::size_t j = 0; j < tk; ++j) {
                dp[i * tk + j] = pb[i * tk + j] * (dp[i * tk + j] - rs) * inv_sqrt;
              }
            }
            if (q.requires_grad()) {
              kt.gemm_nn(tq, dh, tk, dp.data(), tk, kb, d,
                         gbuf(q).data() + b * tq * d + h * dh, d);
            }
            if (k.requires_grad()) {
              kt.gemm_tn(tk, dh, tq, dp.data(), tk, qb, d,
                         gbuf(k).data() + b * tk * d + h * dh, d);
            }
          }
        }
      });
}

Tensor conv_relu_maxpool(const Tensor& x, const Tensor& w, const Tensor& b,
                         std::size_t batch, std::size_t steps,
                         std::size_t kernel) {
  const std::size_t width = x.cols();
  const std::size_t channels = w.cols();
  if (x.rows() != batch * steps) throw data_error("conv: input rows mismatch");
  if (w.rows() != kernel * width) {
    throw data_error("conv: kernel rows " + std::to_string(w.rows()) +
                     " != kernel*width " + std::to_string(kernel * width));
  }
  if (b.rows() != 1 || b.cols() != channels) throw data_error("conv: bias width");
  if (kernel == 0 || steps < kernel) {
    throw data_error("conv: sequence length " + std::to_string(steps) +
                     " shorter than kernel " + std::to_string(kernel));
  }
  const std::size_t positions = steps - kernel + 1;
  const auto& kt = kernels::active();

  Matrix out(batch, channels);
  // Winning position per (sample, channel); -1 when ReLU clamped the max.
  std::vector<int> arg(batch * channels, -1);
  Matrix y(positions, channels);
  for (std::size_t s = 0; s < batch; ++s) {
    y.fill(0.0);
    // Windows overlap in memory: row t starts at x[s*steps + t] and spans
    // kernel*width contiguous values.
    kt.gemm_nn(positions, channels, kernel * width,
               x.value().data() + s * steps * width, width, w.value().data(),
               channels, y.data(), channels);
    for (std::size_t c = 0; c < channels; ++c) {
      double best = -std::numeric_limits<double>::infinity();
      int best_t = 0;
      for (std::size_t t = 0; t < positions; ++t) {
        const double val = y(t, c) + b.value()[c];
        if (val > best) {
          best = val;
          best_t = static_cast<int>(t);
        }
      }
      if (best > 0.0) {
        out(s, c) = best;
        arg[s * channels + c] = best_t;
      }
    }
  }
  return Tensor::make(
      std::move(out), {x, w, b},
      [x, w, b, arg = std::move(arg), batch, steps, kernel, width,
       channels](Node& self) {
        const std::size_t span = kernel * width;
        for (std::size_t s = 0; s < batch; ++s) {
          for (std::size_t c = 0; c < channels; ++c) {
            const int t = arg[s * channels + c];
            if (t < 0) continue;
            const double g = self.grad(s, c);
            if (g == 0.0) continue;
            const double* win = x.value().data() + (s * steps + t) * width;
            if (w.requires_grad()) {
              Matrix& gw = gbuf(w);
              for (std::size_t j = 0; j < span; ++j) gw(j, c) += g * win[j];
            }
            if (b.requires_grad()) gbuf(b)[c] += g;
            if (x.requires_grad()) {
              double* gx = gbuf(x).data() + (s * steps + t) * width;
              for (std::size_t j = 0; j < span; ++j) gx[j] += g * w.value()(j, c);
            }
          }
        }
      });
}

}  // namespace sarc::nn
