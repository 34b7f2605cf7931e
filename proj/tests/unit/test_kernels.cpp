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
#include <vector>

#include "sarc/common/rng.hpp"
#include "sarc/kernels/kernels.hpp"

using namespace sarc;
using namespace sarc::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Exercise every size class: empty, below one vector, register tile edges
// and ragged tails.
const std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17, 33, 64, 129};

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(isa_supported(Isa::kScalar));
  CHECK(scalar_table().isa == Isa::kScalar);
}

TEST_CASE("set_isa pins the active table") {
  const Isa before = active_isa();
  set_isa(Isa::kScalar);
  CHECK(active_isa() == Isa::kScalar);
  if (isa_supported(Isa::kAvx2)) {
    set_isa(Isa::kAvx2);
    CHECK(active_isa() == Isa::kAvx2);
  } else {
    CHECK_THROWS(set_isa(Isa::kAvx2));
  }
  set_isa(before);
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!isa_supported(Isa::kAvx2)) {
    MESSAGE("AVX2 not available; equivalence skipped");
    return;
  }
  const KernelTable& ref = scalar_table();
  const KernelTable& simd = *avx2_table();
  Rng rng(7);

  SUBCASE("dot and axpy") {
    for (std::size_t n : kSizes) {
      auto x = random_vec(n, rng);
      auto y = random_vec(n, rng);
      CHECK(simd.dot(x.data(), y.data(), n) ==
            doctest::Approx(ref.dot(x.data(), y.data(), n)).epsilon(1e-12));
      auto y1 = y, y2 = y;
      ref.axpy(0.37, x.data(), y1.data(), n);
      simd.axpy(0.37, x.data(), y2.data(), n);
      CHECK(max_abs_diff(y1, y2) < 1e-14);
    }
  }

  SUBCASE("gemm variants over ragged shapes") {
    for (std::size_t m : {1, 3, 4, 5, 9}) {
      for (std::size_t n : {1, 4, 7, 8, 9, 17}) {
        for (std::size_t k : {1, 3, 8, 13}) {
          auto a_nn = random_vec(m * k, rng);
          auto b_nn = random_vec(k * n, rng);
          auto c0 = random_vec(m * n, rng);
          auto c1 = c0, c2 = c0;
          ref.gemm_nn(m, n, k, a_nn.data(), k, b_nn.data(), n, c1.data(), n);
          simd.gemm_nn(m, n, k, a_nn.data(), k, b_nn.data(), n, c2.data(), n);
          CHECK(max_abs_diff(c1, c2) < 1e-12);

          auto b_nt = random_vec(n * k, rng);
          c1 = c0;
          c2 = c0;
          ref.gemm_nt(m, n, k, a_nn.data(), k, b_nt.data(), k, c1.data(), n);
          simd.gemm_nt(m, n, k, a_nn.data(), k, b_nt.data(), k, c2.data(), n);
          CHECK(max_abs_diff(c1, c2) < 1e-12);

          auto a_tn = random_vec(k * m, rng);
          c1 = c0;
          c2 = c0;
          ref.gemm_tn(m, n, k, a_tn.data(), m, b_nn.data(), n, c1.data(), n);
          simd.gemm_tn(m, n, k, a_tn.data(), m, b_nn.data(), n, c2.data(), n);
          CHECK(max_abs_diff(c1, c2) < 1e-12);
        }
      }
    }
  }

  SUBCASE("gemm respects leading dimensions larger than the logical width") {
    const std::size_t m = 5, n = 6, k = 7, lda = 11, ldb = 9, ldc = 10;
    auto a = random_vec(m * lda, rng);
    auto b = random_vec(k * ldb, rng);
    auto c0 = random_vec(m * ldc, rng);
    auto c1 = c0, c2 = c0;
    ref.gemm_nn(m, n, k, a.data(), lda, b.data(), ldb, c1.data(), ldc);
    simd.gemm_nn(m, n, k, a.data(), lda, b.data(), ldb, c2.data(), ldc);
    CHECK(max_abs_diff(c1, c2) < 1e-12);
    // Padding columns beyond n are untouched.
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = n; c < ldc; ++c) CHECK(c2[r * ldc + c] == c0[r * ldc + c]);
    }
  }
}

TEST_CASE("scalar gemm_nn agrees with a naive triple loop") {
  Rng rng(3);
  const std::size_t m = 4, n = 5, k = 3;
  auto a = random_vec(m * k, rng);
  auto b = random_vec(k * n, rng);
  std::vector<double> c(m * n, 0.0);
  scalar_table().gemm_nn(m, n, k, a.data(), k, b.data(), n, c.data(), n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * n + j];
      CHECK(c[i * n + j] == doctest::Approx(s).epsilon(1e-14));
    }
  }
}
