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

#include "sarc/nn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sarc/common/error.hpp"
#include "sarc/kernels/kernels.hpp"

namespace sarc::nn {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw data_error("matrix data size " + std::to_string(data_.size()) +
                     " does not match shape " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw data_error("matmul shape mismatch: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  kernels::active().gemm_nn(a.rows(), b.cols(), a.cols(), a.data(), a.cols(),
                            b.data(), b.cols(), out.data(), out.cols());
  return out;
}

double log_sum_exp(std::span<const double> row) {
  if (row.empty()) return -std::numeric_limits<double>::infinity();
  const double mx = *std::max_element(row.begin(), row.end());
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double v : row) s += std::exp(v - mx);
  return mx + std::log(s);
}

void log_softmax_inplace(std::span<double> row) {
  const double lse = log_sum_exp(row);
  for (double& v : row) v -= lse;
}

void softmax_inplace(std::span<double> row) {
  const double lse = log_sum_exp(row);
  for (double& v : row) v = std::exp(v - lse);
}

}  // namespace sarc::nn
