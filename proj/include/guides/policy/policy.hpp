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
#include <span>
#include <vector>

#include "guides/env/world.hpp"
#include "guides/numerics/layers.hpp"
#include "guides/numerics/param_store.hpp"

namespace guides::policy {

using numerics::ParamStore;
using numerics::Tensor2;

struct PolicyConfig {
  std::size_t obs_dim = env::kObsDim;
  std::size_t encoder_hidden = 6144;
  std::size_t latent = 32;
  std::size_t decoder_hidden = 64;
};

/// decoder ∘ encoder over a shared ParamStore. Encoder blocks are prefixed
/// "encoder.", decoder blocks "decoder.".
class Policy {
 public:
  static Policy create(const PolicyConfig& cfg, std::uint64_t seed);
  /// Rebuilds a policy around loaded parameters; shapes define the config.
  static Policy from_params(ParamStore params);

  const PolicyConfig& config() const noexcept { return cfg_; }
  ParamStore& params() noexcept { return params_; }
  const ParamStore& params() const noexcept { return params_; }

  Tensor2 encode(const Tensor2& obs) const;
  std::vector<double> encode(const env::Observation& obs) const;

  Tensor2 decode(const Tensor2& latent, numerics::Mlp2::Trace* trace = nullptr) const;
  std::vector<double> decode(std::span<const double> latent) const;
  /// Accumulates decoder gradients; returns d(loss)/d(latent).
  Tensor2 decode_backward(const numerics::Mlp2::Trace& trace, const Tensor2& dlogits);

  std::vector<double> logits(const env::Observation& obs) const;

  void set_encoder_frozen(bool frozen);
  bool encoder_frozen() const;
  std::vector<std::string> encoder_blocks() const { return encoder_.blocks(); }
  std::vector<std::string> decoder_blocks() const { return decoder_.blocks(); }
  std::size_t parameter_count() const { return params_.count_all(); }

 private:
  Policy(PolicyConfig cfg, ParamStore params);

  PolicyConfig cfg_;
  ParamStore params_;
  numerics::Mlp2 encoder_;
  numerics::Mlp2 decoder_;
};

struct BcOptions {
  int epochs = 8;
  double lr = 0.05;
  std::size_t batch = 32;
  std::uint64_t seed = 0;
};

struct BcResult {
  std::vector<double> epoch_loss;
};

/// Minibatch SGD on mean cross-entropy of expert actions.
BcResult pretrain_bc(Policy& policy, std::span<const env::Trajectory> demos,
                     const BcOptions& options);

enum class SelectMode { greedy, sample };

env::Action select_action(std::span<const double> logits, SelectMode mode = SelectMode::greedy,
                          numerics::Rng* rng = nullptr);

/// Rolls out decode(encode(obs)) greedily until success or horizon.
struct RolloutResult {
  bool success = false;
  int steps = 0;
};
RolloutResult rollout_unguided(const Policy& policy, const env::TaskSpec& task,
                               env::WorldState state, const env::EnvConfig& cfg = {});

}  // namespace guides::policy
