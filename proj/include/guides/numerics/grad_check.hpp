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

#include <functional>
#include <map>
#include <span>
#include <string>

#include "guides/numerics/param_store.hpp"

namespace guides::numerics {

using LossFn = std::function<double()>;

/// Central differences (f(p+h) − f(p−h)) / 2h for every scalar of the named blocks.
/// Values are restored after each probe.
std::map<std::string, Tensor2> finite_diff_gradient(const LossFn& loss, ParamStore& params,
                                                    std::span<const std::string> names,
                                                    double h = 1e-5);

/// max_i |a_i − n_i| / max(|a_i|, |n_i|, floor). The floor keeps entries whose true
/// gradient is ~0 from turning roundoff into a large ratio.
double max_relative_error(const Tensor2& analytic, const Tensor2& numeric, double floor = 1e-6);

}  // namespace guides::numerics
