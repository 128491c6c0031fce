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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "guides/env/world.hpp"

namespace guides::cache {

struct EmbedderConfig {
  std::size_t width = 64;
  std::uint64_t seed = 0xC11F;
  // Per-group feature scales applied before projection.
  double eef_position = 0.35;
  double gripper = 3.0;
  double eef_zone = 0.3;
  double slot_static = 1.0;  // present and appearance bits
  double slot_offset = 0.35;
  double slot_zone = 0.3;
  double slot_held = 3.0;
  double slot_reach = 1.6;
};

/// Fixed random projection of scaled observation features (one weight block
/// shared by all object slots), normalized to unit
/// length. All-zero input maps to e_0.
class ObsEmbedder {
 public:
  explicit ObsEmbedder(const EmbedderConfig& cfg = {});

  std::vector<double> embed(const env::Observation& obs) const;
  std::size_t width() const noexcept { return cfg_.width; }
  const EmbedderConfig& config() const noexcept { return cfg_; }

 private:
  EmbedderConfig cfg_;
  std::vector<double> scales_;      // kObsDim
  std::vector<double> projection_;  // width x kObsDim, row-major
};

double cosine_sim(std::span<const double> a, std::span<const double> b);

struct CacheStats {
  std::size_t steps = 0;
  std::size_t queries = 0;
  std::size_t hits = 0;
  double hit_ratio() const { return steps == 0 ? 0.0 : static_cast<double>(hits) / steps; }
};

/// Per-episode reuse of the last query result while consecutive observation
/// embeddings stay similar. Reuse iff sim > tau_sim.
template <class Output>
class SimilarityCache {
 public:
  using QueryFn = std::function<Output(const env::Observation&)>;

  SimilarityCache(const ObsEmbedder& embedder, double tau_sim)
      : embedder_(&embedder), tau_sim_(tau_sim) {}

  struct Result {
    const Output& output;
    bool was_query;
  };

  Result get_or_query(const env::Observation& obs, const QueryFn& query_fn) {
    std::vector<double> e = embedder_->embed(obs);
    if (last_ && cosine_sim(e, last_embedding_) > tau_sim_) {
      last_embedding_ = std::move(e);
      ++stats_.steps;
      ++stats_.hits;
      return {*last_, false};
    }
    Output fresh = query_fn(obs);  // may throw; nothing updated yet
    last_ = std::move(fresh);
    last_embedding_ = std::move(e);
    ++stats_.steps;
    ++stats_.queries;
    return {*last_, true};
  }

  /// Replaces the cached output, e.g. after reflection refined it.
  void overwrite(Output output) {
    if (!last_) throw std::logic_error("SimilarityCache::overwrite before first query");
    last_ = std::move(output);
  }

  const CacheStats& stats() const noexcept { return stats_; }
  double tau_sim() const noexcept { return tau_sim_; }

 private:
  const ObsEmbedder* embedder_;
  double tau_sim_;
  std::optional<Output> last_;
  std::vector<double> last_embedding_;
  CacheStats stats_;
};

}  // namespace guides::cache
