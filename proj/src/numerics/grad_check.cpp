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

#include "guides/numerics/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace guides::numerics {

std::map<std::string, Tensor2> finite_diff_gradient(const LossFn& loss, ParamStore& params,
                                                    std::span<const std::string> names,
                                                    double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  std::map<std::string, Tensor2> out;
  for (const auto& name : names) {
    Tensor2& value = params.value(name);
    Tensor2 numeric(value.rows(), value.cols());
    auto v = value.values();
    auto g = numeric.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double saved = v[i];
      v[i] = saved + h;
      const double up = loss();
      v[i] = saved - h;
      const double down = loss();
      v[i] = saved;
      g[i] = (up - down) / (2.0 * h);
    }
    out.emplace(name, std::move(numeric));
  }
  return out;
}

double max_relative_error(const Tensor2& analytic, const Tensor2& numeric, double floor) {
  if (!analytic.same_shape(numeric)) {
    throw std::invalid_argument("max_relative_error: shape mismatch");
  }
  double worst = 0.0;
  auto a = analytic.values();
  auto n = numeric.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(n[i]), floor});
    worst = std::max(worst, std::abs(a[i] - n[i]) / denom);
  }
  return worst;
}

}  // namespace guides::numerics
