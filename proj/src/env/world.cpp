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

#include <algorithm>

#include "guides/numerics/random.hpp"

namespace guides::env {
namespace {

using numerics::Rng;

bool occupied(const std::vector<Object>& objects, Cell c) {
  return std::any_of(objects.begin(), objects.end(), [c](const Object& o) { return o.pos == c; });
}

Cell random_free_cell(const Rect& r, const std::vector<Object>& objects, Rng& rng) {
  std::vector<Cell> free;
  for (int y = r.y0; y <= r.y1; ++y) {
    for (int x = r.x0; x <= r.x1; ++x) {
      if (!occupied(objects, {x, y})) free.push_back({x, y});
    }
  }
  if (free.empty()) throw std::invalid_argument("reset: zone has no free cell");
  return free[rng.below(free.size())];
}

Cell grid_center(const EnvConfig& cfg) { return {(cfg.width - 1) / 2, (cfg.height - 1) / 2}; }

/// Zone cell closest to the grid center.
Cell inner_corner(Zone z, const EnvConfig& cfg) {
  const Rect r = zone_rect(z, cfg);
  const Cell c = grid_center(cfg);
  return {std::clamp(c.x, r.x0, r.x1), std::clamp(c.y, r.y0, r.y1)};
}

int sign(int v) { return (v > 0) - (v < 0); }

}  // namespace

std::string_view kind_name(Kind k) {
  static constexpr std::array<std::string_view, kKindCount> names{"apple", "tomato", "banana",
                                                                  "lemon"};
  return names.at(static_cast<std::size_t>(k));
}

std::string_view zone_name(Zone z) {
  static constexpr std::array<std::string_view, kZoneCount> names{"cabinet", "counter", "sink",
                                                                  "stove"};
  return names.at(static_cast<std::size_t>(z));
}

std::string_view action_name(Action a) {
  static constexpr std::array<std::string_view, kActionCount> names{
      "up", "down", "left", "right", "grip_close", "grip_open", "noop"};
  return names.at(static_cast<std::size_t>(a));
}

std::string_view appearance_name(std::size_t appearance) {
  static constexpr std::array<std::string_view, kAppearanceCount> names{"red", "yellow"};
  return names.at(appearance);
}

std::string_view word_name(Word w) {
  static constexpr std::array<std::string_view, kWordCount> names{
      "pick",         "place",       "apple",     "tomato",     "banana",
      "lemon",        "from_cabinet", "from_counter", "from_sink", "from_stove",
      "to_cabinet",   "to_counter",  "to_sink",   "to_stove",   "<pad>"};
  return names.at(static_cast<std::size_t>(w));
}

Rect zone_rect(Zone z, const EnvConfig& cfg) {
  const int zw = cfg.width / 3;
  const int zh = cfg.height / 3;
  switch (z) {
    case Zone::cabinet: return {0, 0, zw - 1, zh - 1};
    case Zone::stove: return {cfg.width - zw, 0, cfg.width - 1, zh - 1};
    case Zone::sink: return {0, cfg.height - zh, zw - 1, cfg.height - 1};
    case Zone::counter: return {cfg.width - zw, cfg.height - zh, cfg.width - 1, cfg.height - 1};
  }
  throw std::invalid_argument("zone_rect: bad zone");
}

std::optional<Zone> zone_at(Cell c, const EnvConfig& cfg) {
  for (std::size_t z = 0; z < kZoneCount; ++z) {
    if (zone_rect(static_cast<Zone>(z), cfg).contains(c)) return static_cast<Zone>(z);
  }
  return std::nullopt;
}

Rect start_rect(const EnvConfig& cfg) {
  const int zw = cfg.width / 3;
  const int zh = cfg.height / 3;
  return {zw, zh, cfg.width - zw - 1, cfg.height - zh - 1};
}

std::vector<int> describe(Kind kind, Zone source, Zone destination) {
  return {static_cast<int>(Word::pick), static_cast<int>(Word::apple) + static_cast<int>(kind),
          static_cast<int>(Word::from_cabinet) + static_cast<int>(source),
          static_cast<int>(Word::to_cabinet) + static_cast<int>(destination)};
}

std::string describe_text(const TaskSpec& task) {
  return "pick " + std::string(kind_name(task.kind)) + " from " +
         std::string(zone_name(task.source)) + " to " + std::string(zone_name(task.destination));
}

const std::vector<TaskSpec>& default_tasks() {
  static const std::vector<TaskSpec> tasks = [] {
    struct Scene {
      Placement a;
      Placement b;
      Zone destination;
    };
    const std::array<Scene, 4> scenes{{
        {{Kind::apple, Zone::cabinet}, {Kind::apple, Zone::sink}, Zone::counter},
        {{Kind::banana, Zone::cabinet}, {Kind::lemon, Zone::stove}, Zone::sink},
        {{Kind::lemon, Zone::stove}, {Kind::lemon, Zone::counter}, Zone::cabinet},
        {{Kind::tomato, Zone::sink}, {Kind::apple, Zone::counter}, Zone::stove},
    }};
    std::vector<TaskSpec> out;
    for (const Scene& s : scenes) {
      for (int which = 0; which < 2; ++which) {
        const Placement target = which == 0 ? s.a : s.b;
        const Placement other = which == 0 ? s.b : s.a;
        TaskSpec t;
        t.id = static_cast<int>(out.size());
        t.kind = target.kind;
        t.source = target.zone;
        t.destination = s.destination;
        t.companions = {other};
        t.tokens = describe(t.kind, t.source, t.destination);
        out.push_back(std::move(t));
      }
    }
    return out;
  }();
  return tasks;
}

const TaskSpec& task_by_id(int id) {
  const auto& tasks = default_tasks();
  if (id < 0 || static_cast<std::size_t>(id) >= tasks.size()) {
    throw std::invalid_argument("unknown task id " + std::to_string(id));
  }
  return tasks[static_cast<std::size_t>(id)];
}

std::uint64_t scene_key(const TaskSpec& task) {
  std::vector<Placement> all = task.companions;
  all.push_back({task.kind, task.source});
  std::sort(all.begin(), all.end());
  std::uint64_t key = numerics::mix_seed(0x5CE7E, static_cast<std::uint64_t>(task.destination));
  for (const Placement& p : all) {
    key = numerics::mix_seed(key, static_cast<std::uint64_t>(p.kind) * 16 +
                                      static_cast<std::uint64_t>(p.zone));
  }
  return key;
}

void validate_task(const TaskSpec& task) {
  if (static_cast<std::size_t>(task.kind) >= kKindCount ||
      static_cast<std::size_t>(task.source) >= kZoneCount ||
      static_cast<std::size_t>(task.destination) >= kZoneCount) {
    throw std::invalid_argument("task " + std::to_string(task.id) + ": enum out of range");
  }
  if (task.source == task.destination) {
    throw std::invalid_argument("task " + std::to_string(task.id) +
                                ": source and destination coincide");
  }
  if (task.companions.size() + 2 > kMaxObjects) {
    throw std::invalid_argument("task " + std::to_string(task.id) + ": too many companions");
  }
  for (const Placement& p : task.companions) {
    if (p.kind == task.kind && p.zone == task.source) {
      throw std::invalid_argument("task " + std::to_string(task.id) +
                                  ": companion duplicates the target placement");
    }
  }
  for (int w : task.tokens) {
    if (w < 0 || static_cast<std::size_t>(w) >= kWordCount) {
      throw std::invalid_argument("task " + std::to_string(task.id) + ": token out of range");
    }
  }
}

WorldState reset(const TaskSpec& task, std::uint64_t seed, const EnvConfig& cfg,
                 const ResetOptions& options) {
  validate_task(task);
  Rng rng(numerics::mix_seed(seed, 0xE11));

  // Canonical order keeps ids and positions independent of which candidate is
  // the target.
  std::vector<Placement> placements{{task.kind, task.source}};
  if (options.ambiguous) {
    placements.insert(placements.end(), task.companions.begin(), task.companions.end());
  }
  std::sort(placements.begin(), placements.end());

  bool decoy_first = false;
  if (options.hard) {
    const bool coin = rng.below(2) == 0;
    decoy_first = options.decoy_first.value_or(coin);
  }
  WorldState s;
  const int first_id = options.hard && decoy_first ? 1 : 0;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    Object o;
    o.id = first_id + static_cast<int>(i);
    o.kind = placements[i].kind;
    o.origin = placements[i].zone;
    o.pos = {-1, -1};
    if (options.hard && o.kind == task.kind && o.origin == task.source) {
      o.pos = inner_corner(task.source, cfg);
    }
    s.objects.push_back(o);
  }
  if (options.hard) {
    const Cell corner = inner_corner(task.source, cfg);
    Object decoy;
    decoy.id = decoy_first ? 0 : static_cast<int>(placements.size());
    decoy.kind = task.kind;
    decoy.pos = {corner.x + sign(grid_center(cfg).x - corner.x), corner.y};
    s.objects.insert(decoy_first ? s.objects.begin() : s.objects.end(), decoy);
  }
  for (Object& o : s.objects) {
    if (o.pos.x < 0) o.pos = random_free_cell(zone_rect(*o.origin, cfg), s.objects, rng);
  }
  std::vector<Cell> starts;
  const Rect sr = start_rect(cfg);
  for (int y = sr.y0; y <= sr.y1; ++y) {
    for (int x = sr.x0; x <= sr.x1; ++x) {
      if (!occupied(s.objects, {x, y})) starts.push_back({x, y});
    }
  }
  if (starts.empty()) throw std::invalid_argument("reset: no free start cell");
  s.eef = starts[rng.below(starts.size())];
  return s;
}

const Object& object_by_id(const WorldState& state, int id) {
  for (const Object& o : state.objects) {
    if (o.id == id) return o;
  }
  throw std::invalid_argument("no object with id " + std::to_string(id));
}

std::optional<int> grab_candidate(const WorldState& state) {
  std::optional<int> best;
  int best_dist = 2;
  for (const Object& o : state.objects) {
    const int d = chebyshev(o.pos, state.eef);
    if (d > 1) continue;
    if (d < best_dist || (d == best_dist && o.id < *best)) {
      best = o.id;
      best_dist = d;
    }
  }
  return best;
}

WorldState step(const WorldState& state, Action action, const EnvConfig& cfg) {
  if (state.t >= cfg.horizon) {
    throw HorizonExceeded("step: t=" + std::to_string(state.t) + " reached horizon " +
                          std::to_string(cfg.horizon));
  }
  WorldState next = state;
  next.t = state.t + 1;
  auto move = [&](int dx, int dy) {
    next.eef.x = std::clamp(state.eef.x + dx, 0, cfg.width - 1);
    next.eef.y = std::clamp(state.eef.y + dy, 0, cfg.height - 1);
  };
  switch (action) {
    case Action::up: move(0, -1); break;
    case Action::down: move(0, 1); break;
    case Action::left: move(-1, 0); break;
    case Action::right: move(1, 0); break;
    case Action::grip_close:
      if (state.gripper == Gripper::open) {
        next.gripper = Gripper::closed;
        next.held = grab_candidate(state);
      }
      break;
    case Action::grip_open:
      next.gripper = Gripper::open;
      next.held.reset();
      break;
    case Action::noop: break;
  }
  if (next.held) {
    for (Object& o : next.objects) {
      if (o.id == *next.held) o.pos = next.eef;
    }
  }
  return next;
}

std::optional<int> find_target(const WorldState& state, const TaskSpec& task) {
  for (const Object& o : state.objects) {
    if (o.kind == task.kind && o.origin == task.source) return o.id;
  }
  return std::nullopt;
}

bool is_success(const WorldState& state, const TaskSpec& task, const EnvConfig& cfg) {
  const auto target = find_target(state, task);
  if (!target || state.gripper != Gripper::open || state.held == target) return false;
  return zone_rect(task.destination, cfg).contains(object_by_id(state, *target).pos);
}

MotionDelta motion_delta(const WorldState& before, const WorldState& after) {
  if (after.t != before.t + 1) {
    throw std::invalid_argument("motion_delta: states at t=" + std::to_string(before.t) +
                                " and t=" + std::to_string(after.t) + " are not consecutive");
  }
  auto code = [](Gripper g) { return g == Gripper::closed ? 1 : 0; };
  return {after.eef.x - before.eef.x, after.eef.y - before.eef.y,
          code(after.gripper) - code(before.gripper)};
}

}  // namespace guides::env
