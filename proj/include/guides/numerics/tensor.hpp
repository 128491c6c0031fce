// Copyright 2026 The guides-kit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace guides::numerics {

/// Dense row-major matrix of doubles. Vectors are 1×n rows.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0);
  Tensor2(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Tensor2 from_row(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }

  void fill(double v);
  bool all_finite() const;
  bool same_shape(const Tensor2& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const Tensor2& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Products backed by Eigen maps. All throw std::invalid_argument on shape mismatch.
Tensor2 matmul(const Tensor2& a, const Tensor2& b);     // a * b
Tensor2 matmul_tn(const Tensor2& a, const Tensor2& b);  // aᵀ * b
Tensor2 matmul_nt(const Tensor2& a, const Tensor2& b);  // a * bᵀ

void add_inplace(Tensor2& dst, const Tensor2& src);
void add_scaled_inplace(Tensor2& dst, const Tensor2& src, double scale);
void add_row_broadcast(Tensor2& dst, const Tensor2& row);
Tensor2 column_sums(const Tensor2& t);
Tensor2 scaled(const Tensor2& t, double s);

Tensor2 stack_rows(std::span<const std::vector<double>> rows);

}  // namespace guides::numerics
