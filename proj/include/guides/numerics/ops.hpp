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

#include "guides/numerics/tensor.hpp"

namespace guides::numerics {

/// Numerically stable exp-normalize. Throws std::invalid_argument on empty or
/// non-finite input.
std::vector<double> softmax(std::span<const double> logits);

/// −log softmax(logits)[target].
double cross_entropy(std::span<const double> logits, std::size_t target);

/// Index of the largest value; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

struct CrossEntropyBatch {
  double mean_loss = 0.0;
  Tensor2 grad_logits;  // d(mean loss)/d(logits)
};

/// Mean cross-entropy over the rows of `logits`, with its gradient.
CrossEntropyBatch cross_entropy_batch(const Tensor2& logits, std::span<const std::size_t> targets);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);

}  // namespace guides::numerics
