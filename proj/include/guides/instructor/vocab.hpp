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
#include <optional>
#include <string>

#include "guides/env/world.hpp"

namespace guides::instructor {

enum class Verb : std::uint8_t { approach, grasp, carry, release, retreat, hold };
inline constexpr std::size_t kVerbCount = 6;

//  0..3  approach(kind)
//  4     grasp
//  5..8  carry(zone)
//  9     release
//  10    retreat
//  11    hold
inline constexpr std::size_t kInstructionCount = env::kKindCount + 1 + env::kZoneCount + 3;

struct Instruction {
  Verb verb = Verb::hold;
  std::optional<env::Kind> kind;  // approach only
  std::optional<env::Zone> zone;  // carry only
  bool operator==(const Instruction&) const = default;
};

std::size_t instruction_index(const Instruction& instr);
Instruction instruction_at(std::size_t index);
Verb verb_of(std::size_t index);
std::string_view verb_name(Verb v);
/// "approach(apple)", "carry(sink)", "grasp", ...
std::string instruction_name(std::size_t index);

/// Instantiates a verb for a task: approach takes the task kind, carry the
/// destination zone.
std::size_t instantiate(Verb verb, const env::TaskSpec& task);

}  // namespace guides::instructor
