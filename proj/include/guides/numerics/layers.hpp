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
#include <string>

#include "guides/numerics/param_store.hpp"
#include "guides/numerics/random.hpp"
#include "guides/numerics/tensor.hpp"

// Layers hold only block names; parameters live in a ParamStore. Each backward()
// adds parameter gradients into the store (skipped for frozen blocks) and returns
// the gradient with respect to its input.

namespace guides::numerics {

/// y = x·W + b with W stored in×out and b as a 1×out row.
struct Linear {
  std::string weight;
  std::string bias;

  static Linear create(ParamStore& store, const std::string& prefix, std::size_t in,
                       std::size_t out, Rng& rng);

  std::size_t in_features(const ParamStore& store) const { return store.value(weight).rows(); }
  std::size_t out_features(const ParamStore& store) const { return store.value(weight).cols(); }

  Tensor2 forward(const ParamStore& store, const Tensor2& x) const;
  /// Returns dx unless `need_input_grad` is false, in which case an empty tensor.
  Tensor2 backward(ParamStore& store, const Tensor2& x, const Tensor2& dy,
                   bool need_input_grad = true) const;
};

Tensor2 relu(const Tensor2& x);
Tensor2 relu_backward(const Tensor2& pre_activation, const Tensor2& dy);

/// Two linear layers with a ReLU between them.
struct Mlp2 {
  Linear fc1;
  Linear fc2;

  struct Trace {
    Tensor2 input;
    Tensor2 pre_hidden;
    Tensor2 hidden;
  };

  static Mlp2 create(ParamStore& store, const std::string& prefix, std::size_t in,
                     std::size_t hidden, std::size_t out, Rng& rng);

  Tensor2 forward(const ParamStore& store, const Tensor2& x, Trace* trace = nullptr) const;
  Tensor2 backward(ParamStore& store, const Trace& trace, const Tensor2& dy,
                   bool need_input_grad = true) const;
  std::vector<std::string> blocks() const { return {fc1.weight, fc1.bias, fc2.weight, fc2.bias}; }
};

/// Single-head scaled dot-product attention of query rows over context rows:
/// softmax((xq·Wq)(xc·Wk)ᵀ / √d) (xc·Wv).
struct CrossAttention {
  std::string wq;
  std::string wk;
  std::string wv;

  struct Trace {
    Tensor2 query_in;
    Tensor2 context_in;
    Tensor2 q;
    Tensor2 k;
    Tensor2 v;
    Tensor2 weights;
  };
  struct InputGrads {
    Tensor2 query;
    Tensor2 context;
  };

  static CrossAttention create(ParamStore& store, const std::string& prefix, std::size_t dim,
                               Rng& rng);

  Tensor2 forward(const ParamStore& store, const Tensor2& query, const Tensor2& context,
                  Trace* trace = nullptr) const;
  InputGrads backward(ParamStore& store, const Trace& trace, const Tensor2& dy) const;
  std::vector<std::string> blocks() const { return {wq, wk, wv}; }
};

/// Row lookup into an embedding table.
Tensor2 gather_rows(const Tensor2& table, std::span<const std::size_t> rows);

/// Uniform(−a, a) fill with a = scale·√(6/(fan_in+fan_out)).
Tensor2 glorot(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0);

}  // namespace guides::numerics
