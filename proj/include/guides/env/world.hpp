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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace guides::env {

// Object kinds come in appearance-tied pairs: apple/tomato look "red",
// banana/lemon look "yellow". The observation only carries appearance.
enum class Kind : std::uint8_t { apple, tomato, banana, lemon };
inline constexpr std::size_t kKindCount = 4;
inline constexpr std::size_t kAppearanceCount = 2;

enum class Zone : std::uint8_t { cabinet, counter, sink, stove };
inline constexpr std::size_t kZoneCount = 4;
/// Zone feature slot used for cells outside every named zone.
inline constexpr std::size_t kFloorSlot = kZoneCount;

enum class Action : std::uint8_t { up, down, left, right, grip_close, grip_open, noop };
inline constexpr std::size_t kActionCount = 7;

enum class Gripper : std::uint8_t { open, closed };

inline std::size_t appearance_of(Kind k) { return static_cast<std::size_t>(k) / 2; }
std::string_view kind_name(Kind k);
std::string_view zone_name(Zone z);
std::string_view action_name(Action a);
std::string_view appearance_name(std::size_t appearance);

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

inline int chebyshev(Cell a, Cell b) {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

struct Rect {
  int x0, y0, x1, y1;  // inclusive
  bool contains(Cell c) const { return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1; }
  Cell centroid() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
};

struct EnvConfig {
  int width = 9;
  int height = 7;
  int horizon = 64;
};

// Zones sit in the four corners; each spans width/3 × height/3 cells.
Rect zone_rect(Zone z, const EnvConfig& cfg);
std::optional<Zone> zone_at(Cell c, const EnvConfig& cfg);
/// Central floor block where episodes start.
Rect start_rect(const EnvConfig& cfg);

struct Object {
  int id = 0;
  Kind kind = Kind::apple;
  Cell pos;
  /// Zone the object was placed in at reset (nullopt for floor decoys). Identifies
  /// the task target together with its kind.
  std::optional<Zone> origin;
  bool operator==(const Object&) const = default;
};

struct WorldState {
  Cell eef;
  Gripper gripper = Gripper::open;
  std::optional<int> held;
  std::vector<Object> objects;
  int t = 0;
  bool operator==(const WorldState&) const = default;
};

// ---- task descriptions -----------------------------------------------------

// Task description words. Zone words are role-tagged so the bag of words keeps
// source and destination apart.
enum class Word : std::uint8_t {
  pick, place,
  apple, tomato, banana, lemon,
  from_cabinet, from_counter, from_sink, from_stove,
  to_cabinet, to_counter, to_sink, to_stove,
  pad,
};
inline constexpr std::size_t kWordCount = 15;
std::string_view word_name(Word w);

struct Placement {
  Kind kind = Kind::apple;
  Zone zone = Zone::cabinet;
  auto operator<=>(const Placement&) const = default;
};

struct TaskSpec {
  int id = 0;
  Kind kind = Kind::apple;
  Zone source = Zone::cabinet;
  Zone destination = Zone::counter;
  /// Other objects placed alongside the target; appearance-tied when ambiguous.
  std::vector<Placement> companions;
  std::vector<int> tokens;  // Word ids
};

std::vector<int> describe(Kind kind, Zone source, Zone destination);
std::string describe_text(const TaskSpec& task);

/// The built-in task catalog: four scenes, two tasks per scene. Tasks sharing a
/// scene differ only in which appearance-tied candidate is the target.
const std::vector<TaskSpec>& default_tasks();
const TaskSpec& task_by_id(int id);
/// Scene key shared by tasks whose layouts coincide.
std::uint64_t scene_key(const TaskSpec& task);

struct ResetOptions {
  /// Place the appearance-tied companions next to the target.
  bool ambiguous = true;
  /// Put the target at the source zone's inner corner and a same-kind floor
  /// decoy beside it, on the side facing the grid center.
  bool hard = false;
  /// Whether the decoy takes the lowest object id (so a grasp with both in reach
  /// picks it). Unset: a fair coin from the reset seed.
  std::optional<bool> decoy_first;
};

class HorizonExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPlan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate_task(const TaskSpec& task);

WorldState reset(const TaskSpec& task, std::uint64_t seed, const EnvConfig& cfg = {},
                 const ResetOptions& options = {});
WorldState step(const WorldState& state, Action action, const EnvConfig& cfg = {});

/// Object grip_close would attach in `state`, if any: the nearest object within
/// Chebyshev distance 1, ties to the lowest id.
std::optional<int> grab_candidate(const WorldState& state);
std::optional<int> find_target(const WorldState& state, const TaskSpec& task);
const Object& object_by_id(const WorldState& state, int id);
bool is_success(const WorldState& state, const TaskSpec& task, const EnvConfig& cfg = {});

// ---- observation -----------------------------------------------------------

inline constexpr std::size_t kMaxObjects = 4;
inline constexpr std::size_t kGlobalFeatures = 3 + kZoneCount + 1;
inline constexpr std::size_t kSlotFeatures = 1 + kAppearanceCount + 2 + kZoneCount + 1 + 2;
inline constexpr std::size_t kObsDim = kGlobalFeatures + kMaxObjects * kSlotFeatures;

/// Partial view of a WorldState: end-effector, gripper and per-object slots sorted
/// by position. Nothing in it says which object the task is about.
struct Observation {
  std::vector<double> features;
  bool operator==(const Observation&) const = default;
};

Observation observe(const WorldState& state, const EnvConfig& cfg = {});

/// Read-only accessors over Observation::features.
class ObservationView {
 public:
  struct Slot {
    bool present = false;
    std::size_t appearance = 0;
    int dx = 0;
    int dy = 0;
    std::size_t zone = kFloorSlot;
    bool held = false;
    bool in_reach = false;
  };

  ObservationView(const Observation& obs, const EnvConfig& cfg = {});

  bool gripper_closed() const;
  bool holding() const;
  std::size_t eef_zone() const;
  Slot slot(std::size_t i) const;
  std::size_t objects_in_reach() const;
  /// Present slot with the smallest Chebyshev offset, ties to the lower slot.
  std::optional<std::size_t> nearest_slot() const;

 private:
  const Observation& obs_;
  EnvConfig cfg_;
};

// ---- motion deltas and demonstrations --------------------------------------

struct MotionDelta {
  int dx = 0;
  int dy = 0;
  int dgrip = 0;
  bool operator==(const MotionDelta&) const = default;
};

MotionDelta motion_delta(const WorldState& before, const WorldState& after);

Action expert_action(const WorldState& state, const TaskSpec& task, const EnvConfig& cfg = {});

struct Step {
  Observation obs;
  Action action = Action::noop;
  std::optional<MotionDelta> delta;
  std::optional<WorldState> state;  // absent for trajectories loaded from JSONL
};

struct Trajectory {
  int task_id = 0;
  int episode = 0;
  std::vector<Step> steps;
  bool success = false;
};

struct DemoOptions {
  bool ambiguous = true;
  /// Probability that a demonstration uses the hard layout.
  double hard_fraction = 0.0;
  int max_retries = 8;
};

/// Layout seed for (task, episode); tasks sharing a scene share layouts.
std::uint64_t layout_seed(std::uint64_t seed, const TaskSpec& task, int episode);

std::vector<Trajectory> generate_demonstrations(std::span<const TaskSpec> tasks, int n_per_task,
                                                std::uint64_t seed, const EnvConfig& cfg = {},
                                                const DemoOptions& options = {});

/// True when the first observation shows an object outside every zone, i.e.
/// the demonstration used the hard layout.
bool starts_with_decoy(const Trajectory& traj);

/// Runs the expert from `state` until success or horizon.
Trajectory expert_rollout(const TaskSpec& task, WorldState state, const EnvConfig& cfg = {});

}  // namespace guides::env
