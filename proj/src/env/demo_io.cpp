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

#include "guides/env/demo_io.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace guides::env {

using Json = nlohmann::ordered_json;

void write_demos_jsonl(std::span<const Trajectory> demos, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const Trajectory& traj : demos) {
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      const Step& s = traj.steps[t];
      Json j;
      j["task_id"] = traj.task_id;
      j["episode"] = traj.episode;
      j["t"] = t;
      j["obs"] = s.obs.features;
      j["action"] = static_cast<int>(s.action);
      const MotionDelta d = s.delta.value_or(MotionDelta{});
      j["delta"] = {d.dx, d.dy, d.dgrip};
      j["success"] = traj.success;
      out << j.dump() << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<Trajectory> read_demos_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<Trajectory> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
      const int task_id = j.at("task_id").get<int>();
      const int episode = j.at("episode").get<int>();
      const int t = j.at("t").get<int>();
      if (t == 0 || out.empty() || out.back().task_id != task_id || out.back().episode != episode) {
        out.push_back(Trajectory{task_id, episode, {}, j.at("success").get<bool>()});
      }
      Step s;
      s.obs.features = j.at("obs").get<std::vector<double>>();
      if (s.obs.features.size() != kObsDim) throw std::invalid_argument("obs width");
      const int a = j.at("action").get<int>();
      if (a < 0 || a >= static_cast<int>(kActionCount)) throw std::invalid_argument("action");
      s.action = static_cast<Action>(a);
      const auto d = j.at("delta").get<std::vector<int>>();
      if (d.size() != 3) throw std::invalid_argument("delta width");
      s.delta = MotionDelta{d[0], d[1], d[2]};
      out.back().steps.push_back(std::move(s));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": bad demo record (" + e.what() + ")");
    }
  }
  return out;
}

}  // namespace guides::env
