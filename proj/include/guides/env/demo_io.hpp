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
#include <span>
#include <vector>

#include "guides/env/world.hpp"

namespace guides::env {

// Demonstrations as JSON Lines, one object per timestep:
//   {task_id, episode, t, obs, action, delta, success}
// Loaded steps carry no WorldState snapshot.
void write_demos_jsonl(std::span<const Trajectory> demos, const std::filesystem::path& path);
std::vector<Trajectory> read_demos_jsonl(const std::filesystem::path& path);

}  // namespace guides::env
