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

#include <filesystem>

#include "guides/numerics/param_store.hpp"

namespace guides::numerics {

// Checkpoint layout:
//   <path>           raw little-endian float64 blocks, concatenated in store order
//   <path>.manifest  one line per block: "<name> <rows> <cols> <frozen 0|1> <byte offset>"
// The manifest starts with a "guides-checkpoint v1" header line.

void save_checkpoint(const ParamStore& store, const std::filesystem::path& path);
ParamStore load_checkpoint(const std::filesystem::path& path);

std::filesystem::path manifest_path(const std::filesystem::path& path);

}  // namespace guides::numerics
