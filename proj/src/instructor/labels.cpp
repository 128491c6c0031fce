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

#include "guides/instructor/labels.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "guides/numerics/random.hpp"

namespace guides::instructor {

using Json = nlohmann::ordered_json;

std::size_t stage1_label(bool holding, const env::MotionDelta& delta, const env::TaskSpec& task) {
  if (delta.dgrip > 0) return instantiate(Verb::grasp, task);
  if (delta.dgrip < 0) return instantiate(Verb::release, task);
  if (delta.dx != 0 || delta.dy != 0) {
    return instantiate(holding ? Verb::carry : Verb::approach, task);
  }
  return instantiate(Verb::hold, task);
}

std::size_t generate_gt_instruction(const env::WorldState& state, const env::MotionDelta& delta,
                                    const env::TaskSpec& task) {
  return stage1_label(state.held.has_value(), delta, task);
}

InstructionLabelSet build_instruction_dataset(std::span<const env::Trajectory> demos) {
  InstructionLabelSet out;
  for (const auto& traj : demos) {
    const env::TaskSpec& task = env::task_by_id(traj.task_id);
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      const env::Step& s = traj.steps[t];
      if (!s.delta) {
        throw std::invalid_argument("build_instruction_dataset: step " + std::to_string(t) +
                                    " of episode " + std::to_string(traj.episode) +
                                    " has no motion delta");
      }
      const bool holding = s.state ? s.state->held.has_value() : env::ObservationView(s.obs).holding();
      out.push_back({traj.task_id, traj.episode, static_cast<int>(t), s.obs, task.tokens,
                     stage1_label(holding, *s.delta, task)});
    }
  }
  return out;
}

InstructionLabelSet build_uninformative_dataset(std::span<const env::Trajectory> demos,
                                                std::uint64_t seed) {
  numerics::Rng rng(numerics::mix_seed(seed, 0x0BF5));
  InstructionLabelSet out;
  for (const auto& traj : demos) {
    const env::TaskSpec& task = env::task_by_id(traj.task_id);
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      const Verb v = static_cast<Verb>(rng.below(kVerbCount));
      out.push_back({traj.task_id, traj.episode, static_cast<int>(t), traj.steps[t].obs,
                     task.tokens, instantiate(v, task)});
    }
  }
  return out;
}

void write_labels_jsonl(std::span<const LabeledExample> labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& ex : labels) {
    Json j;
    j["task_id"] = ex.task_id;
    j["episode"] = ex.episode;
    j["t"] = ex.t;
    j["obs"] = ex.obs.features;
    j["task_tokens"] = ex.task_tokens;
    j["label"] = ex.label;
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

InstructionLabelSet read_labels_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  InstructionLabelSet out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      LabeledExample ex;
      ex.task_id = j.at("task_id").get<int>();
      ex.episode = j.value("episode", 0);
      ex.t = j.at("t").get<int>();
      ex.obs.features = j.at("obs").get<std::vector<double>>();
      ex.task_tokens = j.at("task_tokens").get<std::vector<int>>();
      ex.label = j.at("label").get<std::size_t>();
      if (ex.obs.features.size() != env::kObsDim) throw std::invalid_argument("obs width");
      if (ex.label >= kInstructionCount) throw std::invalid_argument("label out of range");
      out.push_back(std::move(ex));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": bad label record (" + e.what() + ")");
    }
  }
  return out;
}

}  // namespace guides::instructor
