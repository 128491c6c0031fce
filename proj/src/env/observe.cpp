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

#include <algorithm>
#include <cmath>

#include "guides/env/world.hpp"

namespace guides::env {
namespace {

// Slot layout offsets.
constexpr std::size_t kPresent = 0;
constexpr std::size_t kAppearance = 1;
constexpr std::size_t kDx = kAppearance + kAppearanceCount;
constexpr std::size_t kDy = kDx + 1;
constexpr std::size_t kZone = kDy + 1;
constexpr std::size_t kHeld = kZone + kZoneCount + 1;
constexpr std::size_t kReach = kHeld + 1;
static_assert(kReach + 1 == kSlotFeatures);

std::size_t zone_slot(Cell c, const EnvConfig& cfg) {
  const auto z = zone_at(c, cfg);
  return z ? static_cast<std::size_t>(*z) : kFloorSlot;
}

double span_x(const EnvConfig& cfg) { return static_cast<double>(std::max(cfg.width - 1, 1)); }
double span_y(const EnvConfig& cfg) { return static_cast<double>(std::max(cfg.height - 1, 1)); }

}  // namespace

Observation observe(const WorldState& state, const EnvConfig& cfg) {
  if (state.objects.size() > kMaxObjects) {
    throw std::invalid_argument("observe: more than " + std::to_string(kMaxObjects) + " objects");
  }
  Observation obs;
  auto& f = obs.features;
  f.assign(kObsDim, 0.0);
  f[0] = state.eef.x / span_x(cfg);
  f[1] = state.eef.y / span_y(cfg);
  f[2] = state.gripper == Gripper::closed ? 1.0 : 0.0;
  f[3 + zone_slot(state.eef, cfg)] = 1.0;

  std::vector<const Object*> order;
  for (const Object& o : state.objects) order.push_back(&o);
  auto key = [&](const Object* o) {
    return std::tuple(o->pos.y, o->pos.x, appearance_of(o->kind), state.held == o->id);
  };
  std::sort(order.begin(), order.end(),
            [&](const Object* a, const Object* b) { return key(a) < key(b); });

  for (std::size_t i = 0; i < order.size(); ++i) {
    const Object& o = *order[i];
    double* s = f.data() + kGlobalFeatures + i * kSlotFeatures;
    s[kPresent] = 1.0;
    s[kAppearance + appearance_of(o.kind)] = 1.0;
    s[kDx] = (o.pos.x - state.eef.x) / span_x(cfg);
    s[kDy] = (o.pos.y - state.eef.y) / span_y(cfg);
    s[kZone + zone_slot(o.pos, cfg)] = 1.0;
    s[kHeld] = state.held == o.id ? 1.0 : 0.0;
    s[kReach] = chebyshev(o.pos, state.eef) <= 1 ? 1.0 : 0.0;
  }
  return obs;
}

ObservationView::ObservationView(const Observation& obs, const EnvConfig& cfg)
    : obs_(obs), cfg_(cfg) {
  if (obs.features.size() != kObsDim) {
    throw std::invalid_argument("ObservationView: expected " + std::to_string(kObsDim) +
                                " features, got " + std::to_string(obs.features.size()));
  }
}

bool ObservationView::gripper_closed() const { return obs_.features[2] > 0.5; }

bool ObservationView::holding() const {
  for (std::size_t i = 0; i < kMaxObjects; ++i) {
    if (slot(i).held) return true;
  }
  return false;
}

std::size_t ObservationView::eef_zone() const {
  for (std::size_t z = 0; z <= kZoneCount; ++z) {
    if (obs_.features[3 + z] > 0.5) return z;
  }
  return kFloorSlot;
}

ObservationView::Slot ObservationView::slot(std::size_t i) const {
  if (i >= kMaxObjects) throw std::out_of_range("ObservationView::slot");
  const double* s = obs_.features.data() + kGlobalFeatures + i * kSlotFeatures;
  Slot out;
  out.present = s[kPresent] > 0.5;
  if (!out.present) return out;
  out.appearance = s[kAppearance + 1] > s[kAppearance] ? 1 : 0;
  out.dx = static_cast<int>(std::lround(s[kDx] * span_x(cfg_)));
  out.dy = static_cast<int>(std::lround(s[kDy] * span_y(cfg_)));
  for (std::size_t z = 0; z <= kZoneCount; ++z) {
    if (s[kZone + z] > 0.5) out.zone = z;
  }
  out.held = s[kHeld] > 0.5;
  out.in_reach = s[kReach] > 0.5;
  return out;
}

std::size_t ObservationView::objects_in_reach() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < kMaxObjects; ++i) {
    const Slot s = slot(i);
    if (s.present && s.in_reach) ++n;
  }
  return n;
}

std::optional<std::size_t> ObservationView::nearest_slot() const {
  std::optional<std::size_t> best;
  int best_dist = 0;
  for (std::size_t i = 0; i < kMaxObjects; ++i) {
    const Slot s = slot(i);
    if (!s.present) continue;
    const int d = std::max(std::abs(s.dx), std::abs(s.dy));
    if (!best || d < best_dist) {
      best = i;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace guides::env
