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

#include "guides/env/world.hpp"
#include "guides/numerics/random.hpp"

namespace guides::env {
namespace {

Action toward(Cell from, Cell to) {
  if (to.x < from.x) return Action::left;
  if (to.x > from.x) return Action::right;
  if (to.y < from.y) return Action::up;
  if (to.y > from.y) return Action::down;
  return Action::noop;
}

}  // namespace

Action expert_action(const WorldState& state, const TaskSpec& task, const EnvConfig& cfg) {
  const auto target = find_target(state, task);
  if (!target) {
    throw NoPlan("expert: task " + std::to_string(task.id) + " has no target in the scene");
  }
  if (is_success(state, task, cfg)) return Action::noop;
  if (state.held == target) {
    const Cell goal = zone_rect(task.destination, cfg).centroid();
    return state.eef == goal ? Action::grip_open : toward(state.eef, goal);
  }
  if (state.held || state.gripper == Gripper::closed) return Action::grip_open;
  if (grab_candidate(state) == target) return Action::grip_close;
  return toward(state.eef, object_by_id(state, *target).pos);
}

Trajectory expert_rollout(const TaskSpec& task, WorldState state, const EnvConfig& cfg) {
  Trajectory traj;
  traj.task_id = task.id;
  while (!is_success(state, task, cfg) && state.t < cfg.horizon) {
    const Action a = expert_action(state, task, cfg);
    WorldState next = step(state, a, cfg);
    Step s;
    s.obs = observe(state, cfg);
    s.action = a;
    s.delta = motion_delta(state, next);
    s.state = state;
    traj.steps.push_back(std::move(s));
    state = std::move(next);
  }
  traj.success = is_success(state, task, cfg);
  return traj;
}

bool starts_with_decoy(const Trajectory& traj) {
  if (traj.steps.empty()) return false;
  const ObservationView v(traj.steps.front().obs);
  for (std::size_t i = 0; i < kMaxObjects; ++i) {
    const auto s = v.slot(i);
    if (s.present && s.zone == kFloorSlot) return true;
  }
  return false;
}

std::uint64_t layout_seed(std::uint64_t seed, const TaskSpec& task, int episode) {
  return numerics::mix_seed(numerics::mix_seed(seed, scene_key(task)),
                            static_cast<std::uint64_t>(episode));
}

std::vector<Trajectory> generate_demonstrations(std::span<const TaskSpec> tasks, int n_per_task,
                                                std::uint64_t seed, const EnvConfig& cfg,
                                                const DemoOptions& options) {
  if (n_per_task < 0) throw std::invalid_argument("generate_demonstrations: negative count");
  if (options.hard_fraction < 0.0 || options.hard_fraction > 1.0) {
    throw std::invalid_argument("generate_demonstrations: hard_fraction outside [0, 1]");
  }
  std::vector<Trajectory> out;
  for (const TaskSpec& task : tasks) {
    for (int ep = 0; ep < n_per_task; ++ep) {
      const std::uint64_t base = layout_seed(seed, task, ep);
      numerics::Rng pick(numerics::mix_seed(base, 0x4A2D));
      ResetOptions ro;
      ro.ambiguous = options.ambiguous;
      ro.hard = pick.uniform() < options.hard_fraction;
      for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        const std::uint64_t s = attempt == 0 ? base : numerics::mix_seed(base, attempt);
        Trajectory traj = expert_rollout(task, reset(task, s, cfg, ro), cfg);
        if (traj.success || attempt == options.max_retries) {
          traj.episode = ep;
          out.push_back(std::move(traj));
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace guides::env
