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
#include <filesystem>
#include <string>
#include <vector>

#include "guides/aem/aem.hpp"
#include "guides/cache/cache.hpp"
#include "guides/instructor/model.hpp"
#include "guides/policy/policy.hpp"
#include "guides/reflector/reflector.hpp"

namespace guides::harness {

struct RunConfig {
  // world
  int grid_width = 9;
  int grid_height = 7;
  int horizon = 64;
  // sizes
  std::size_t latent_dim = 32;
  std::size_t encoder_hidden = 6144;
  std::size_t decoder_hidden = 64;
  std::size_t instructor_hidden = 64;
  std::size_t instruction_vocab = instructor::kInstructionCount;
  std::size_t word_vocab = env::kWordCount;
  // data and training
  std::uint64_t seed = 1;
  int demos_per_task = 150;
  double demo_hard_fraction = 0.3;
  int pretrain_epochs = 8;
  double pretrain_lr = 0.05;
  std::size_t pretrain_batch = 32;
  double aem_init_scale = 24.0;
  int finetune_epochs = 0;  // 0: use the clamped schedule
  double finetune_lr = 0.02;
  std::size_t finetune_batch = 8;
  int instructor_epochs = 30;
  double instructor_lr = 0.1;
  double hint_probability = 0.3;
  // inference
  double tau = 0.6;
  double tau_sim = 0.95;
  std::size_t top_k = 2;
  int r_max = 2;
  // evaluation
  std::uint64_t eval_seed = 1000;
  int eval_seed_count = 5;
  int episodes_per_task = 25;
  int reflector_trials = 20;
  // ablations
  bool no_motion_ft = false;
  bool no_task_desc = false;
  bool random_g = false;

  env::EnvConfig env() const { return {grid_width, grid_height, horizon}; }
  policy::PolicyConfig policy() const {
    return {env::kObsDim, encoder_hidden, latent_dim, decoder_hidden};
  }
  reflector::ReflectorConfig reflector() const { return {tau, top_k, r_max}; }
  std::vector<std::uint64_t> eval_seeds() const;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// "key = value" lines; '#' starts a comment.
std::string to_text(const RunConfig& cfg);
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);
/// Sets one field from its textual value.
void set_field(RunConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

}  // namespace guides::harness
