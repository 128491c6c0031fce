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

#include "guides/cache/cache.hpp"

#include <cmath>

#include "guides/numerics/ops.hpp"
#include "guides/numerics/random.hpp"

namespace guides::cache {

ObsEmbedder::ObsEmbedder(const EmbedderConfig& cfg) : cfg_(cfg), scales_(env::kObsDim, 0.0) {
  if (cfg.width == 0) throw std::invalid_argument("ObsEmbedder: width must be positive");
  scales_[0] = scales_[1] = cfg.eef_position;
  scales_[2] = cfg.gripper;
  for (std::size_t z = 0; z <= env::kZoneCount; ++z) scales_[3 + z] = cfg.eef_zone;
  for (std::size_t i = 0; i < env::kMaxObjects; ++i) {
    double* s = scales_.data() + env::kGlobalFeatures + i * env::kSlotFeatures;
    s[0] = s[1] = s[2] = cfg.slot_static;
    s[3] = s[4] = cfg.slot_offset;
    for (std::size_t z = 0; z <= env::kZoneCount; ++z) s[5 + z] = cfg.slot_zone;
    s[10] = cfg.slot_held;
    s[11] = cfg.slot_reach;
  }
  // Slots share one projection so the embedding ignores slot order.
  numerics::Rng rng(cfg.seed);
  std::vector<double> global(cfg.width * env::kGlobalFeatures);
  std::vector<double> slot(cfg.width * env::kSlotFeatures);
  for (double& w : global) w = rng.normal();
  for (double& w : slot) w = rng.normal();
  projection_.resize(cfg.width * env::kObsDim);
  for (std::size_t r = 0; r < cfg.width; ++r) {
    double* row = projection_.data() + r * env::kObsDim;
    for (std::size_t c = 0; c < env::kGlobalFeatures; ++c) row[c] = global[r * env::kGlobalFeatures + c];
    for (std::size_t i = 0; i < env::kMaxObjects; ++i) {
      for (std::size_t c = 0; c < env::kSlotFeatures; ++c) {
        row[env::kGlobalFeatures + i * env::kSlotFeatures + c] = slot[r * env::kSlotFeatures + c];
      }
    }
  }
}

std::vector<double> ObsEmbedder::embed(const env::Observation& obs) const {
  if (obs.features.size() != env::kObsDim) {
    throw std::invalid_argument("ObsEmbedder: expected " + std::to_string(env::kObsDim) +
                                " features");
  }
  std::vector<double> out(cfg_.width, 0.0);
  for (std::size_t r = 0; r < cfg_.width; ++r) {
    const double* w = projection_.data() + r * env::kObsDim;
    double acc = 0.0;
    for (std::size_t c = 0; c < env::kObsDim; ++c) acc += w[c] * scales_[c] * obs.features[c];
    out[r] = acc;
  }
  const double norm = numerics::l2_norm(out);
  if (norm == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
    return out;
  }
  for (double& v : out) v /= norm;
  return out;
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_sim: width mismatch");
  return numerics::dot(a, b);
}

}  // namespace guides::cache
