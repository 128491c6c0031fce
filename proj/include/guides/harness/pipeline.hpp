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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guides/harness/config.hpp"

namespace guides::harness {

std::vector<env::Trajectory> generate_demos(const RunConfig& cfg);

struct PretrainOutput {
  policy::Policy policy;
  std::vector<double> epoch_loss;
};
PretrainOutput pretrain(const RunConfig& cfg, std::span<const env::Trajectory> demos);

struct FinetuneOutput {
  policy::Policy policy;
  aem::Aem aem;
  aem::Schedule schedule;
  int epochs = 0;
  aem::FinetuneResult result;
};
/// Freezes the encoder of a copy of the pretrained policy, then trains decoder and AEM.
FinetuneOutput finetune(const RunConfig& cfg, const policy::Policy& pretrained,
                        std::span<const env::Trajectory> demos, bool drop_task_description);

struct InstructorOutputBundle {
  instructor::InstructorModel model;
  instructor::InstructorTrainResult result;
};
InstructorOutputBundle train_instructor(const RunConfig& cfg,
                                        const instructor::InstructionLabelSet& labels,
                                        const numerics::Tensor2& hint_table);

/// Root-mean-square of g over every (task, instruction) pair.
double guidance_rms(const aem::Aem& aem, bool drop_task_description);

struct Artifacts {
  policy::Policy pretrained;
  FinetuneOutput full;
  FinetuneOutput no_task;
  InstructorOutputBundle instructor;
  InstructorOutputBundle instructor_no_motion;
  double g_rms = 0.0;
  std::vector<double> bc_loss;
};

/// generate -> pretrain -> finetune -> label -> train-instructor, in memory.
Artifacts train_all(const RunConfig& cfg);

}  // namespace guides::harness
