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


#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "guides/env/demo_io.hpp"
#include "guides/env/world.hpp"

using namespace guides::env;

namespace {

void expect_valid(const WorldState& s, const EnvConfig& cfg = {}) {
  auto in_grid = [&](Cell c) { return c.x >= 0 && c.y >= 0 && c.x < cfg.width && c.y < cfg.height; };
  EXPECT_TRUE(in_grid(s.eef));
  std::set<Cell> cells;
  for (const auto& o : s.objects) {
    EXPECT_TRUE(in_grid(o.pos));
    if (s.held != o.id) cells.insert(o.pos);
  }
  if (s.held) EXPECT_EQ(object_by_id(s, *s.held).pos, s.eef);
  EXPECT_LE(s.t, cfg.horizon);
}

}  // namespace

TEST(Tasks, CatalogPairsShareScenes) {
  const auto& tasks = default_tasks();
  ASSERT_EQ(tasks.size(), 8u);
  for (const auto& t : tasks) {
    EXPECT_NO_THROW(validate_task(t));
    EXPECT_EQ(&task_by_id(t.id), &t);
  }
  for (std::size_t i = 0; i < tasks.size(); i += 2) {
    EXPECT_EQ(scene_key(tasks[i]), scene_key(tasks[i + 1]));
    EXPECT_EQ(appearance_of(tasks[i].kind), appearance_of(tasks[i + 1].kind));
    EXPECT_NE(describe_text(tasks[i]), describe_text(tasks[i + 1]));
  }
  EXPECT_THROW(task_by_id(99), std::invalid_argument);
}

TEST(Tasks, ValidationRejectsBadSpecs) {
  TaskSpec t = default_tasks()[0];
  t.destination = t.source;
  EXPECT_THROW(validate_task(t), std::invalid_argument);
  t = default_tasks()[0];
  t.tokens.push_back(static_cast<int>(kWordCount));
  EXPECT_THROW(validate_task(t), std::invalid_argument);
  t = default_tasks()[0];
  t.companions.push_back({t.kind, t.source});
  EXPECT_THROW(validate_task(t), std::invalid_argument);
}

TEST(Reset, LayoutIsValidAndStartsOnFloor) {
  for (const auto& task : default_tasks()) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      for (bool hard : {false, true}) {
        ResetOptions ro;
        ro.hard = hard;
        const WorldState s = reset(task, seed, {}, ro);
        expect_valid(s);
        EXPECT_TRUE(start_rect({}).contains(s.eef));
        EXPECT_EQ(s.gripper, Gripper::open);
        EXPECT_FALSE(s.held);
        ASSERT_TRUE(find_target(s, task));
        std::set<Cell> cells;
        for (const auto& o : s.objects) cells.insert(o.pos);
        EXPECT_EQ(cells.size(), s.objects.size());
      }
    }
  }
}

TEST(Reset, PairedTasksSeeTheSameWorld) {
  const auto& tasks = default_tasks();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = reset(tasks[0], layout_seed(seed, tasks[0], 3));
    const auto b = reset(tasks[1], layout_seed(seed, tasks[1], 3));
    EXPECT_EQ(a, b);
    EXPECT_EQ(observe(a), observe(b));
  }
}

TEST(Reset, HardLayoutPlacesAdjacentDecoy) {
  const TaskSpec& task = default_tasks()[2];
  for (bool first : {false, true}) {
    ResetOptions ro;
    ro.hard = true;
    ro.decoy_first = first;
    const WorldState s = reset(task, 17, {}, ro);
    const Object* decoy = nullptr;
    for (const auto& o : s.objects) {
      if (!o.origin) decoy = &o;
    }
    ASSERT_NE(decoy, nullptr);
    EXPECT_EQ(decoy->kind, task.kind);
    const Object& target = object_by_id(s, *find_target(s, task));
    EXPECT_EQ(chebyshev(decoy->pos, target.pos), 1);
    EXPECT_EQ(decoy->id == 0, first);
  }
}

TEST(Step, MovesClampAndTimeAdvances) {
  WorldState s;
  s.eef = {0, 0};
  s = step(s, Action::left);
  EXPECT_EQ(s.eef, (Cell{0, 0}));
  s = step(s, Action::up);
  EXPECT_EQ(s.eef, (Cell{0, 0}));
  s = step(s, Action::right);
  s = step(s, Action::down);
  EXPECT_EQ(s.eef, (Cell{1, 1}));
  EXPECT_EQ(s.t, 4);
}

TEST(Step, GraspTakesNearestThenLowestId) {
  WorldState s;
  s.eef = {4, 3};
  s.objects = {{0, Kind::apple, {5, 4}, Zone::sink}, {1, Kind::tomato, {4, 3}, Zone::stove},
               {2, Kind::lemon, {3, 3}, std::nullopt}};
  EXPECT_EQ(grab_candidate(s), 1);
  s.objects[1].pos = {8, 6};
  EXPECT_EQ(grab_candidate(s), 0);
  const auto closed = step(s, Action::grip_close);
  EXPECT_EQ(closed.held, 0);
  const auto moved = step(closed, Action::left);
  EXPECT_EQ(object_by_id(moved, 0).pos, moved.eef);
  const auto released = step(moved, Action::grip_open);
  EXPECT_FALSE(released.held);
  EXPECT_EQ(object_by_id(released, 0).pos, moved.eef);
  s.objects = {{0, Kind::apple, {7, 6}, Zone::sink}};
  EXPECT_FALSE(step(s, Action::grip_close).held);
}

TEST(Step, HorizonIsEnforced) {
  WorldState s;
  s.t = EnvConfig{}.horizon;
  EXPECT_THROW(step(s, Action::noop), HorizonExceeded);
}

TEST(Expert, SolvesEveryLayoutWithinHorizon) {
  double total = 0;
  int n = 0;
  for (const auto& task : default_tasks()) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      for (bool hard : {false, true}) {
        ResetOptions ro;
        ro.hard = hard;
        const auto traj = expert_rollout(task, reset(task, seed, {}, ro));
        ASSERT_TRUE(traj.success) << "task " << task.id << " seed " << seed;
        total += static_cast<double>(traj.steps.size());
        ++n;
        for (const auto& st : traj.steps) {
          ASSERT_TRUE(st.state && st.delta);
          expect_valid(*st.state);
          EXPECT_EQ(*st.delta, motion_delta(*st.state, step(*st.state, st.action)));
        }
      }
    }
  }
  EXPECT_GE(total / n, 4.0);
  EXPECT_LE(total / n, EnvConfig{}.horizon);
}

TEST(Expert, NoTargetMeansNoPlan) {
  WorldState s;
  EXPECT_THROW(expert_action(s, default_tasks()[0]), NoPlan);
}

TEST(Observe, FeatureLayoutAndView) {
  const auto& task = default_tasks()[0];
  WorldState s = reset(task, 5);
  const Observation obs = observe(s);
  ASSERT_EQ(obs.features.size(), kObsDim);
  const ObservationView v(obs);
  EXPECT_FALSE(v.gripper_closed());
  EXPECT_FALSE(v.holding());
  std::size_t present = 0;
  for (std::size_t i = 0; i < kMaxObjects; ++i) present += v.slot(i).present ? 1 : 0;
  EXPECT_EQ(present, s.objects.size());
  EXPECT_THROW(ObservationView(Observation{{1.0, 2.0}}), std::invalid_argument);
}

TEST(Observe, IgnoresObjectIdOrder) {
  WorldState s = reset(default_tasks()[4], 9);
  WorldState r = s;
  std::reverse(r.objects.begin(), r.objects.end());
  EXPECT_EQ(observe(s), observe(r));
}

TEST(Demos, GenerationIsDeterministicAndRoundTrips) {
  DemoOptions opts;
  opts.hard_fraction = 0.5;
  const auto& tasks = default_tasks();
  const auto a = generate_demonstrations(tasks, 3, 11, {}, opts);
  const auto b = generate_demonstrations(tasks, 3, 11, {}, opts);
  ASSERT_EQ(a.size(), 24u);
  const auto path = std::filesystem::temp_directory_path() / "guides_demo_test.jsonl";
  write_demos_jsonl(a, path);
  const auto back = read_demos_jsonl(path);
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].steps.size(), b[i].steps.size());
    EXPECT_EQ(back[i].task_id, a[i].task_id);
    EXPECT_EQ(back[i].episode, a[i].episode);
    EXPECT_EQ(back[i].success, a[i].success);
    ASSERT_EQ(back[i].steps.size(), a[i].steps.size());
    for (std::size_t t = 0; t < a[i].steps.size(); ++t) {
      EXPECT_EQ(back[i].steps[t].obs, a[i].steps[t].obs);
      EXPECT_EQ(back[i].steps[t].action, a[i].steps[t].action);
      EXPECT_EQ(back[i].steps[t].delta, a[i].steps[t].delta);
    }
  }
  EXPECT_THROW(generate_demonstrations(tasks, -1, 1), std::invalid_argument);
}
