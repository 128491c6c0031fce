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

#include "guides/instructor/vocab.hpp"

#include <array>
#include <stdexcept>

namespace guides::instructor {
namespace {

constexpr std::size_t kGrasp = env::kKindCount;
constexpr std::size_t kCarry0 = kGrasp + 1;
constexpr std::size_t kRelease = kCarry0 + env::kZoneCount;
constexpr std::size_t kRetreat = kRelease + 1;
constexpr std::size_t kHold = kRetreat + 1;
static_assert(kHold + 1 == kInstructionCount);

}  // namespace

std::size_t instruction_index(const Instruction& instr) {
  switch (instr.verb) {
    case Verb::approach:
      if (!instr.kind) throw std::invalid_argument("approach needs a kind");
      return static_cast<std::size_t>(*instr.kind);
    case Verb::grasp: return kGrasp;
    case Verb::carry:
      if (!instr.zone) throw std::invalid_argument("carry needs a zone");
      return kCarry0 + static_cast<std::size_t>(*instr.zone);
    case Verb::release: return kRelease;
    case Verb::retreat: return kRetreat;
    case Verb::hold: return kHold;
  }
  throw std::invalid_argument("instruction_index: bad verb");
}

Instruction instruction_at(std::size_t index) {
  if (index >= kInstructionCount) {
    throw std::invalid_argument("instruction index " + std::to_string(index) + " out of range");
  }
  if (index < kGrasp) return {Verb::approach, static_cast<env::Kind>(index), std::nullopt};
  if (index == kGrasp) return {Verb::grasp, std::nullopt, std::nullopt};
  if (index < kRelease) {
    return {Verb::carry, std::nullopt, static_cast<env::Zone>(index - kCarry0)};
  }
  if (index == kRelease) return {Verb::release, std::nullopt, std::nullopt};
  if (index == kRetreat) return {Verb::retreat, std::nullopt, std::nullopt};
  return {Verb::hold, std::nullopt, std::nullopt};
}

Verb verb_of(std::size_t index) { return instruction_at(index).verb; }

std::string_view verb_name(Verb v) {
  static constexpr std::array<std::string_view, kVerbCount> names{
      "approach", "grasp", "carry", "release", "retreat", "hold"};
  return names.at(static_cast<std::size_t>(v));
}

std::string instruction_name(std::size_t index) {
  const Instruction in = instruction_at(index);
  std::string out(verb_name(in.verb));
  if (in.kind) out += "(" + std::string(env::kind_name(*in.kind)) + ")";
  if (in.zone) out += "(" + std::string(env::zone_name(*in.zone)) + ")";
  return out;
}

std::size_t instantiate(Verb verb, const env::TaskSpec& task) {
  Instruction in{verb, std::nullopt, std::nullopt};
  if (verb == Verb::approach) in.kind = task.kind;
  if (verb == Verb::carry) in.zone = task.destination;
  return instruction_index(in);
}

}  // namespace guides::instructor
