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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guides/env/world.hpp"
#include "guides/instructor/labels.hpp"
#include "guides/numerics/layers.hpp"

namespace guides::instructor {

using numerics::ParamStore;
using numerics::Tensor2;

struct InstructorConfig {
  std::size_t hidden = 64;
  std::size_t context = 32;
};

/// Perceptron over [obs ⊕ bag-of-words(task) ⊕ context]. Blocks prefixed
/// "instructor.".
class InstructorModel {
 public:
  static InstructorModel create(const InstructorConfig& cfg, std::uint64_t seed);
  static InstructorModel from_params(ParamStore params);

  std::size_t context_width() const { return context_; }
  std::size_t input_width() const { return env::kObsDim + env::kWordCount + context_; }
  ParamStore& params() noexcept { return params_; }
  const ParamStore& params() const noexcept { return params_; }

  /// Fills one input row. Empty context means zeros.
  void write_input(std::span<double> row, const env::Observation& obs, std::span<const int> tokens,
                   std::span<const double> context) const;
  Tensor2 forward(const Tensor2& inputs, numerics::Mlp2::Trace* trace = nullptr) const;
  void backward(const numerics::Mlp2::Trace& trace, const Tensor2& dlogits);

  std::vector<double> logits(const env::Observation& obs, std::span<const int> tokens,
                             std::span<const double> context = {}) const;

 private:
  InstructorModel(ParamStore params, std::size_t context);

  ParamStore params_;
  std::size_t context_;
  numerics::Mlp2 mlp_;
};

struct InstructorTrainOptions {
  int epochs = 30;
  double lr = 0.1;
  std::size_t batch = 32;
  std::uint64_t seed = 0;
  /// Probability that a training row carries the label's own embedding as
  /// context.
  double hint_probability = 0.3;
  /// Fraction of episodes held out for accuracy.
  double holdout_fraction = 0.1;
};

struct InstructorTrainResult {
  std::vector<double> epoch_loss;
  double heldout_accuracy = 0.0;
  std::size_t heldout_examples = 0;
};

/// hint_table, when non-empty, holds one context row per instruction.
InstructorTrainResult finetune_instructor(InstructorModel& model, const InstructionLabelSet& labels,
                                          const InstructorTrainOptions& options,
                                          const Tensor2& hint_table = {});

bool is_heldout(int task_id, int episode, double fraction, std::uint64_t seed);

/// (1/L) Σ max softmax(row).
double confidence(std::span<const std::vector<double>> rows);

struct InstructorOutput {
  std::string condition;
  std::size_t instruction = 0;
  double confidence = 0.0;
  std::vector<std::string> trace;
  bool operator==(const InstructorOutput&) const = default;
};

/// Template-rendered condition text for an observation.
std::string render_condition(const env::Observation& obs);

InstructorOutput instruct(const InstructorModel& model, const env::Observation& obs,
                          const env::TaskSpec& task,
                          std::optional<std::span<const double>> context = std::nullopt);

}  // namespace guides::instructor
