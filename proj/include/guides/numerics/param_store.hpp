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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "guides/numerics/tensor.hpp"

namespace guides::numerics {

/// Named parameter blocks with matching gradient blocks. Iteration order is
/// insertion order, which also fixes the checkpoint layout.
///
/// Frozen blocks never receive gradient: accumulate_grad() drops contributions
/// aimed at them, and sgd_step() leaves their bytes untouched.
class ParamStore {
 public:
  Tensor2& add(const std::string& name, Tensor2 init);

  bool contains(const std::string& name) const { return blocks_.count(name) != 0; }
  const std::vector<std::string>& names() const noexcept { return order_; }

  const Tensor2& value(const std::string& name) const { return block(name).value; }
  Tensor2& value(const std::string& name) { return block(name).value; }
  const Tensor2& grad(const std::string& name) const { return block(name).grad; }
  bool has_grad(const std::string& name) const { return block(name).has_grad; }

  void accumulate_grad(const std::string& name, const Tensor2& g);
  /// Adds `g` to the given rows of the gradient block (embedding-table backward).
  void accumulate_grad_rows(const std::string& name, std::span<const std::size_t> rows,
                            const Tensor2& g);

  void set_frozen(const std::string& name, bool frozen);
  bool frozen(const std::string& name) const { return block(name).frozen; }

  void zero_grad();

  /// Scalar parameter count of the named blocks. Unknown names throw
  /// std::invalid_argument.
  std::size_t count(std::span<const std::string> names) const;
  std::size_t count_all() const;

  /// Names starting with `prefix`, in insertion order.
  std::vector<std::string> names_with_prefix(const std::string& prefix) const;

 private:
  struct Block {
    Tensor2 value;
    Tensor2 grad;
    bool frozen = false;
    bool has_grad = false;
  };

  Block& block(const std::string& name);
  const Block& block(const std::string& name) const;

  std::vector<std::string> order_;
  std::map<std::string, Block> blocks_;
};

/// p ← p − lr·g for every trainable block. Throws std::invalid_argument for
/// lr ≤ 0 and std::logic_error when a trainable block has no gradient.
void sgd_step(ParamStore& store, double lr);

std::size_t count_params(const ParamStore& store, std::span<const std::string> names);

}  // namespace guides::numerics
