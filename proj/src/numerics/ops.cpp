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

#include "guides/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace guides::numerics {
namespace {

void check_logits(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
  for (double v : logits) {
    if (!std::isfinite(v)) throw std::invalid_argument("softmax: non-finite logit");
  }
}

}  // namespace

std::vector<double> softmax(std::span<const double> logits) {
  check_logits(logits);
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

double cross_entropy(std::span<const double> logits, std::size_t target) {
  check_logits(logits);
  if (target >= logits.size()) {
    throw std::invalid_argument("cross_entropy: target " + std::to_string(target) +
                                " out of range for " + std::to_string(logits.size()) +
                                " classes");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double v : logits) total += std::exp(v - peak);
  return std::log(total) + peak - logits[target];
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

CrossEntropyBatch cross_entropy_batch(const Tensor2& logits,
                                      std::span<const std::size_t> targets) {
  if (logits.rows() != targets.size()) {
    throw std::invalid_argument("cross_entropy_batch: " + std::to_string(logits.rows()) +
                                " rows but " + std::to_string(targets.size()) + " targets");
  }
  CrossEntropyBatch out;
  out.grad_logits = Tensor2(logits.rows(), logits.cols());
  if (logits.rows() == 0) return out;
  const double inv_n = 1.0 / static_cast<double>(logits.rows());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    out.mean_loss += cross_entropy(logits.row(r), targets[r]) * inv_n;
    const auto probs = softmax(logits.row(r));
    auto g = out.grad_logits.row(r);
    for (std::size_t c = 0; c < probs.size(); ++c) {
      g[c] = (probs[c] - (c == targets[r] ? 1.0 : 0.0)) * inv_n;
    }
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace guides::numerics
