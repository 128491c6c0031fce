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

#include <gtest/gtest.h>

#include <vector>

#include "guides/numerics/grad_check.hpp"
#include "guides/numerics/random.hpp"

namespace guides::testing {

inline numerics::Tensor2 random_tensor(std::size_t r, std::size_t c, numerics::Rng& rng,
                                       double scale = 1.0) {
  numerics::Tensor2 t(r, c);
  for (double& v : t.values()) v = scale * rng.normal();
  return t;
}

/// <a, b> over all entries.
inline double inner(const numerics::Tensor2& a, const numerics::Tensor2& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values()[i] * b.values()[i];
  return s;
}

/// Compares accumulated gradients in `store` with central differences of `loss`.
inline void expect_param_grads(const numerics::LossFn& loss, numerics::ParamStore& store,
                               const std::vector<std::string>& names, double tol = 1e-4) {
  const auto numeric = numerics::finite_diff_gradient(loss, store, names);
  for (const auto& n : names) {
    EXPECT_LT(numerics::max_relative_error(store.grad(n), numeric.at(n)), tol) << n;
  }
}

/// Central differences of `loss` with respect to every entry of `x`.
inline numerics::Tensor2 input_fd(const std::function<double()>& loss, numerics::Tensor2& x,
                                  double h = 1e-5) {
  numerics::Tensor2 g(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x.values()[i];
    x.values()[i] = keep + h;
    const double up = loss();
    x.values()[i] = keep - h;
    const double down = loss();
    x.values()[i] = keep;
    g.values()[i] = (up - down) / (2 * h);
  }
  return g;
}

}  // namespace guides::testing
