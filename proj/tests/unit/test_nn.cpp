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

#include <doctest.h>

#include <cmath>

#include "gradcheck.hpp"
#include "sarc/common/rng.hpp"
#include "sarc/kernels/kernels.hpp"
#include "sarc/nn/layers.hpp"
#include "sarc/nn/ops.hpp"

using namespace sarc;
using namespace sarc::nn;
using sarc::testing::gradcheck;

namespace {

Matrix rand_matrix(std::size_t r, std::size_t c, Rng& rng, double s = 1.0) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.uniform(-s, s);
  return m;
}

constexpr double kTol = 1e-6;

}  // namespace

TEST_CASE("elementwise and matrix ops pass finite differences") {
  Rng rng(11);
  ParamStore ps;
  Tensor a = ps.add("a", rand_matrix(3, 4, rng));
  Tensor b = ps.add("b", rand_matrix(4, 5, rng));
  Tensor c = ps.add("c", rand_matrix(3, 5, rng));
  Tensor bias = ps.add("bias", rand_matrix(1, 5, rng));
  auto loss = [&] {
    Tensor h = add_row(matmul(a, b), bias);
    h = sigmoid(add(mul(h, c), scale(c, 0.3)));
    h = sub(h, relu(c));
    return sum_all(log_softmax_rows(h));
  };
  auto r = gradcheck(ps.items(), loss);
  CHECK_MESSAGE(r.max_rel_error < kTol, r.worst);
}

TEST_CASE("layer norm, softmax and pooling gradients") {
  Rng rng(12);
  ParamStore ps;
  Tensor x = ps.add("x", rand_matrix(6, 5, rng));
  Tensor g = ps.add("g", rand_matrix(1, 5, rng));
  Tensor be = ps.add("be", rand_matrix(1, 5, rng));
  Tensor w = ps.add("w", rand_matrix(5, 5, rng));
  std::vector<bool> mask = {true, true, false, true, false, false};
  auto loss = [&] {
    Tensor h = layer_norm_rows(x, g, be);
    Tensor s = softmax_rows(matmul(h, w));
    Tensor p = masked_mean_pool(mul(s, h), 2, 3, mask);
    return sum_all(mul(p, p));
  };
  auto r = gradcheck(ps.items(), loss);
  CHECK_MESSAGE(r.max_rel_error < kTol, r.worst);
}

TEST_CASE("gather-style ops gradients") {
  Rng rng(13);
  ParamStore ps;
  Tensor table = ps.add("table", rand_matrix(7, 3, rng));
  Tensor f = ps.add("f", rand_matrix(2, 2, rng));
  auto loss = [&] {
    Tensor e = embedding(table, {1, 4, 4, 0, 6, 2});
    Tensor fr = repeat_rows(f, 3);
    Tensor x = concat_cols({e, fr});
    Tensor y = concat_rows({slice_cols(x, 1, 4), slice_cols(select_rows(x, {5, 0}), 0, 3)});
    Tensor lp = log_softmax_rows(y);
    return add(scale(pick_sum(lp, {0, 2, -1, 1, 2, 0, 1, 1}), -1.0),
               sum_all(mul_row_const(y, {0.5, 0.0, 2.0})));
  };
  auto r = gradcheck(ps.items(), loss);
  CHECK_MESSAGE(r.max_rel_error < kTol, r.worst);
}

TEST_CASE("binary cross-entropy variants") {
  Rng rng(14);
  ParamStore ps;
  Tensor z = ps.add("z", rand_matrix(5, 1, rng, 3.0));
  std::vector<double> t = {1, 0, 1, 0.3, 0};
  auto r1 = gradcheck(ps.items(), [&] { return bce_with_logits(z, t); });
  CHECK_MESSAGE(r1.max_rel_error < kTol, r1.worst);
  auto r2 = gradcheck(ps.items(), [&] { return bce_prob(sigmoid(z), t); });
  CHECK_MESSAGE(r2.max_rel_error < kTol, r2.worst);

  // Both forms agree in value.
  CHECK(bce_with_logits(z, t).item() ==
        doctest::Approx(bce_prob(sigmoid(z), t).item()).epsilon(1e-10));
  // Exact 0/1 probabilities against matching targets give zero loss.
  Tensor p = Tensor::constant(Matrix(2, 1, std::vector<double>{1.0, 0.0}));
  CHECK(bce_prob(p, {1.0, 0.0}).item() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("attention gradients with causal and key masks") {
  Rng rng(15);
  ParamStore ps;
  const std::size_t batch = 2, t = 4, d = 6, heads = 2;
  Tensor q = ps.add("q", rand_matrix(batch * t, d, rng));
  Tensor k = ps.add("k", rand_matrix(batch * t, d, rng));
  Tensor v = ps.add("v", rand_matrix(batch * t, d, rng));
  std::vector<bool> mask = {true, true, true, false, true, true, false, false};
  auto r1 = gradcheck(ps.items(), [&] {
    return sum_all(mul(attention(q, k, v, batch, t, t, heads, true), q));
  });
  CHECK_MESSAGE(r1.max_rel_error < kTol, r1.worst);
  auto r2 = gradcheck(ps.items(), [&] {
    return sum_all(mul(attention(q, k, v, batch, t, t, heads, false, mask), q));
  });
  CHECK_MESSAGE(r2.max_rel_error < kTol, r2.worst);
}

TEST_CASE("attention ignores masked keys") {
  Rng rng(16);
  const std::size_t t = 3, d = 4;
  Matrix q = rand_matrix(t, d, rng), k = rand_matrix(t, d, rng),
         v = rand_matrix(t, d, rng);
  std::vector<bool> mask = {true, true, false};
  Tensor out1 = attention(Tensor::constant(q), Tensor::constant(k),
                          Tensor::constant(v), 1, t, t, 2, false, mask);
  for (std::size_t c = 0; c < d; ++c) {
    k(2, c) += 5.0;
    v(2, c) -= 3.0;
  }
  Tensor out2 = attention(Tensor::constant(q), Tensor::constant(k),
                          Tensor::constant(v), 1, t, t, 2, false, mask);
  for (std::size_t i = 0; i < out1.size(); ++i) {
    CHECK(out1.value()[i] == doctest::Approx(out2.value()[i]).epsilon(1e-12));
  }
}

TEST_CASE("conv + relu + max-over-time matches a hand-rolled oracle") {
  // Two samples of 4 steps, width 2, kernel 2, 3 channels.
  Rng rng(17);
  const std::size_t batch = 2, steps = 4, width = 2, kernel = 2, ch = 3;
  Matrix x = rand_matrix(batch * steps, width, rng);
  Matrix w = rand_matrix(kernel * width, ch, rng);
  Matrix b = rand_matrix(1, ch, rng, 0.2);
  Tensor out = conv_relu_maxpool(Tensor::constant(x), Tensor::constant(w),
                                 Tensor::constant(b), batch, steps, kernel);
  for (std::size_t s = 0; s < batch; ++s) {
    for (std::size_t c = 0; c < ch; ++c) {
      double best = -1e300;
      for (std::size_t t = 0; t + kernel <= steps; ++t) {
        double acc = b[c];
        for (std::size_t j = 0; j < kernel; ++j)
          for (std::size_t e = 0; e < width; ++e)
            acc += x(s * steps + t + j, e) * w(j * width + e, c);
        best = std::max(best, acc);
      }
      CHECK(out.value()(s, c) == doctest::Approx(std::max(best, 0.0)).epsilon(1e-12));
    }
  }

  ParamStore ps;
  Tensor xp = ps.add("x", x);
  Tensor wp = ps.add("w", w);
  Tensor bp = ps.add("b", b);
  auto r = gradcheck(ps.items(), [&] {
    Tensor o = conv_relu_maxpool(xp, wp, bp, batch, steps, kernel);
    return sum_all(mul(o, o));
  });
  CHECK_MESSAGE(r.max_rel_error < kTol, r.worst);
}

TEST_CASE("transformer blocks pass finite differences") {
  Rng rng(18);
  ParamStore ps;
  const std::size_t batch = 2, t = 3, d = 4;
  DecoderLayer dec(ps, "dec", d, 2, 8, rng);
  EncoderLayer enc(ps, "enc", d, 2, 8, rng);
  Tensor x = ps.add("x", rand_matrix(batch * t, d, rng));
  Tensor mem = ps.add("mem", rand_matrix(batch, d, rng));
  std::vector<bool> mask = {true, true, false, true, false, false};
  auto r = gradcheck(ps.items(), [&] {
    Tensor h = dec(x, mem, batch, t, 1);
    h = enc(h, batch, t, mask);
    return sum_all(mul(h, x));
  });
  CHECK_MESSAGE(r.max_rel_error < 1e-5, r.worst);
}

TEST_CASE("ops give identical results under scalar and SIMD kernels") {
  if (!kernels::isa_supported(kernels::Isa::kAvx2)) return;
  Rng rng(19);
  ParamStore ps;
  DecoderLayer dec(ps, "dec", 8, 2, 16, rng);
  Matrix x = rand_matrix(10, 8, rng);
  Matrix mem = rand_matrix(2, 8, rng);
  const kernels::Isa before = kernels::active_isa();
  auto run = [&] {
    ps.zero_grad();
    Tensor out = dec(Tensor::constant(x), Tensor::constant(mem), 2, 5, 1);
    Tensor l = sum_all(mul(out, out));
    l.backward();
    return std::make_pair(out.value(), dec.ffn.up.w.grad());
  };
  kernels::set_isa(kernels::Isa::kScalar);
  auto [v1, g1] = run();
  kernels::set_isa(kernels::Isa::kAvx2);
  auto [v2, g2] = run();
  kernels::set_isa(before);
  for (std::size_t i = 0; i < v1.size(); ++i) CHECK(std::abs(v1[i] - v2[i]) < 1e-10);
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(std::abs(g1[i] - g2[i]) < 1e-9);
}

TEST_CASE("no-grad guard suppresses graph construction") {
  ParamStore ps;
  Tensor w = ps.add("w", Matrix(2, 2, 1.0));
  {
    NoGradGuard ng;
    Tensor y = matmul(w, w);
    CHECK_FALSE(y.requires_grad());
  }
  CHECK(matmul(w, w).requires_grad());
}

TEST_CASE("adam moves parameters against the gradient") {
  ParamStore ps;
  Tensor w = ps.add("w", Matrix(1, 1, 2.0));
  Adam opt(ps.tensors(), {.lr = 0.1});
  for (int i = 0; i < 200; ++i) {
    opt.zero_grad();
    sum_all(mul(w, w)).backward();
    opt.step();
  }
  CHECK(std::abs(w.value()[0]) < 0.05);
}

TEST_CASE("parameter store round-trips through a blob file") {
  Rng rng(20);
  ParamStore a;
  a.add("l.w", rand_matrix(3, 2, rng));
  a.add("l.b", rand_matrix(1, 2, rng));
  const auto path = std::filesystem::temp_directory_path() / "sarc_params_test.bin";
  a.save(path);
  ParamStore b;
  b.add("l.w", Matrix(3, 2));
  b.add("l.b", Matrix(1, 2));
  b.load(path);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(b.get("l.w").value()[i] == a.get("l.w").value()[i]);
  }
  ParamStore c;
  c.add("l.w", Matrix(2, 3));
  c.add("l.b", Matrix(1, 2));
  CHECK_THROWS(c.load(path));
  std::filesystem::remove(path);
}
