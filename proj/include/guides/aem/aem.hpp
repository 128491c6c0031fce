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

#include "guides/cache/cache.hpp"
#include "guides/env/world.hpp"
#include "guides/instructor/vocab.hpp"
#include "guides/numerics/layers.hpp"
#include "guides/policy/policy.hpp"

namespace guides::aem {

using numerics::ParamStore;
using numerics::Tensor2;

struct GuidanceInput {
  std::span<const int> task_tokens;
  std::size_t instruction = 0;
};

/// g = FFN(q + Attn(q, E_w[tokens])) with q = E_i[instruction]. Blocks are
/// prefixed "aem.".
class Aem {
 public:
  struct Trace {
    std::vector<std::size_t> tokens;
    std::size_t instruction = 0;
    numerics::CrossAttention::Trace attn;
    numerics::Mlp2::Trace ffn;
  };

  /// output_scale multiplies the initial weights of the last feed-forward layer.
  static Aem create(std::size_t dim, std::uint64_t seed, double output_scale = 1.0,
                    std::size_t instructions = instructor::kInstructionCount,
                    std::size_t words = env::kWordCount);
  static Aem from_params(ParamStore params);

  std::size_t dim() const { return params_.value(instr_table_).cols(); }
  ParamStore& params() noexcept { return params_; }
  const ParamStore& params() const noexcept { return params_; }
  std::size_t parameter_count() const { return params_.count_all(); }
  const Tensor2& instruction_table() const { return params_.value(instr_table_); }

  std::vector<double> guidance_embedding(const GuidanceInput& in, Trace* trace = nullptr) const;
  /// Accumulates gradients of every AEM block for d(loss)/d(g).
  void backward(const Trace& trace, std::span<const double> dg);

 private:
  explicit Aem(ParamStore params);

  ParamStore params_;
  std::string instr_table_ = "aem.instruction_table";
  std::string word_table_ = "aem.word_table";
  numerics::CrossAttention attn_;
  numerics::Mlp2 ffn_;
};

std::vector<double> fuse(std::span<const double> latent, std::span<const double> g);

std::vector<double> guided_forward(const policy::Policy& policy, const Aem& aem,
                                   const env::Observation& obs, const GuidanceInput& in);
/// decode(fuse(latent, g)) for an explicit g.
std::vector<double> guided_logits(const policy::Policy& policy, std::span<const double> latent,
                                  std::span<const double> g);

struct Schedule {
  std::size_t raw = 0;
  std::size_t clamped = 0;
};
/// raw = ceil(n_eta * E / n_theta), clamped to [1, ceil(E / 10)].
Schedule guidance_schedule(std::size_t n_eta, std::size_t n_theta, std::size_t epochs);

/// Per-step training instructions for the demo steps, in order. Stage-1 labels
/// refresh only where the observation embedding leaves the cache's reuse band.
std::vector<std::size_t> training_instructions(std::span<const env::Trajectory> demos,
                                               const cache::ObsEmbedder& embedder,
                                               double tau_sim);

struct FinetuneOptions {
  int epochs = 1;
  double lr = 0.02;
  std::size_t batch = 8;
  std::uint64_t seed = 0;
  /// Replace every task description with a single pad token.
  bool drop_task_description = false;
};

struct FinetuneResult {
  double initial_loss = 0.0;
  std::vector<double> epoch_loss;
};

FinetuneResult finetune_with_guidance(policy::Policy& policy, Aem& aem,
                                      std::span<const env::Trajectory> demos,
                                      std::span<const std::size_t> instructions,
                                      const FinetuneOptions& options);

std::vector<double> random_guidance(std::size_t dim, double rms, numerics::Rng& rng);

/// Task tokens seen by the AEM, honoring the no-description ablation.
std::vector<int> aem_tokens(const env::TaskSpec& task, bool drop_task_description);

}  // namespace guides::aem
