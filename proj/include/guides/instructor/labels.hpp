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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "guides/env/world.hpp"
#include "guides/instructor/vocab.hpp"

namespace guides::instructor {

/// Ground-truth instruction for one expert transition.
std::size_t generate_gt_instruction(const env::WorldState& state, const env::MotionDelta& delta,
                                    const env::TaskSpec& task);
/// Same rule keyed on whether the gripper holds something before the step.
std::size_t stage1_label(bool holding, const env::MotionDelta& delta, const env::TaskSpec& task);

struct LabeledExample {
  int task_id = 0;
  int episode = 0;
  int t = 0;
  env::Observation obs;
  std::vector<int> task_tokens;
  std::size_t label = 0;
};
using InstructionLabelSet = std::vector<LabeledExample>;

/// One example per demo step. Tasks are resolved from the default catalog.
InstructionLabelSet build_instruction_dataset(std::span<const env::Trajectory> demos);
/// Same examples with the verb drawn uniformly per step, ignoring the motion.
InstructionLabelSet build_uninformative_dataset(std::span<const env::Trajectory> demos,
                                                std::uint64_t seed);

void write_labels_jsonl(std::span<const LabeledExample> labels, const std::filesystem::path& path);
InstructionLabelSet read_labels_jsonl(const std::filesystem::path& path);

}  // namespace guides::instructor
