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

#include "guides/numerics/param_store.hpp"

#include <stdexcept>

namespace guides::numerics {

Tensor2& ParamStore::add(const std::string& name, Tensor2 init) {
  if (contains(name)) throw std::invalid_argument("ParamStore: duplicate block " + name);
  Block b;
  b.grad = Tensor2(init.rows(), init.cols());
  b.value = std::move(init);
  order_.push_back(name);
  return blocks_.emplace(name, std::move(b)).first->second.value;
}

ParamStore::Block& ParamStore::block(const std::string& name) {
  auto it = blocks_.find(name);
  if (it == blocks_.end()) throw std::invalid_argument("ParamStore: unknown block " + name);
  return it->second;
}

const ParamStore::Block& ParamStore::block(const std::string& name) const {
  auto it = blocks_.find(name);
  if (it == blocks_.end()) throw std::invalid_argument("ParamStore: unknown block " + name);
  return it->second;
}

void ParamStore::accumulate_grad(const std::string& name, const Tensor2& g) {
  Block& b = block(name);
  if (!b.value.same_shape(g)) {
    throw std::invalid_argument("ParamStore: gradient shape mismatch for " + name);
  }
  if (b.frozen) return;
  add_inplace(b.grad, g);
  b.has_grad = true;
}

void ParamStore::accumulate_grad_rows(const std::string& name, std::span<const std::size_t> rows,
                                      const Tensor2& g) {
  Block& b = block(name);
  if (g.rows() != rows.size() || g.cols() != b.value.cols()) {
    throw std::invalid_argument("ParamStore: row gradient shape mismatch for " + name);
  }
  if (b.frozen) return;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= b.value.rows()) throw std::invalid_argument("ParamStore: row out of range");
    auto dst = b.grad.row(rows[i]);
    auto src = g.row(i);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
  }
  b.has_grad = true;
}

void ParamStore::set_frozen(const std::string& name, bool frozen) {
  Block& b = block(name);
  b.frozen = frozen;
  if (frozen) {
    b.grad.fill(0.0);
    b.has_grad = false;
  }
}

void ParamStore::zero_grad() {
  for (auto& [name, b] : blocks_) {
    b.grad.fill(0.0);
    b.has_grad = false;
  }
}

std::size_t ParamStore::count(std::span<const std::string> names) const {
  std::size_t total = 0;
  for (const auto& n : names) total += block(n).value.size();
  return total;
}

std::size_t ParamStore::count_all() const { return count(order_); }

std::vector<std::string> ParamStore::names_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& n : order_) {
    if (n.compare(0, prefix.size(), prefix) == 0) out.push_back(n);
  }
  return out;
}

void sgd_step(ParamStore& store, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("sgd_step: lr must be positive");
  for (const auto& name : store.names()) {
    if (store.frozen(name)) continue;
    if (!store.has_grad(name)) {
      throw std::logic_error("sgd_step: missing gradient for trainable block " + name);
    }
  }
  for (const auto& name : store.names()) {
    if (store.frozen(name)) continue;
    add_scaled_inplace(store.value(name), store.grad(name), -lr);
  }
}

std::size_t count_params(const ParamStore& store, std::span<const std::string> names) {
  return store.count(names);
}

}  // namespace guides::numerics
