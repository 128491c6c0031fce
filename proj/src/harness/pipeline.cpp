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

#include "guides/harness/pipeline.hpp"

#include <cmath>

namespace guides::harness {

std::vector<env::Trajectory> generate_demos(const RunConfig& cfg) {
  cfg.validate();
  env::DemoOptions opts;
  opts.hard_fraction = cfg.demo_hard_fraction;
  return env::generate_demonstrations(env::default_tasks(), cfg.demos_per_task, cfg.seed,
                                      cfg.env(), opts);
}

PretrainOutput pretrain(const RunConfig& cfg, std::span<const env::Trajectory> demos) {
  PretrainOutput out{policy::Policy::create(cfg.policy(), cfg.seed), {}};
  out.epoch_loss = policy::pretrain_bc(out.policy, demos,
                                       {cfg.pretrain_epochs, cfg.pretrain_lr, cfg.pretrain_batch,
                                        cfg.seed})
                       .epoch_loss;
  return out;
}

FinetuneOutput finetune(const RunConfig& cfg, const policy::Policy& pretrained,
                        std::span<const env::Trajectory> demos, bool drop_task_description) {
  FinetuneOutput out{pretrained, aem::Aem::create(cfg.latent_dim, cfg.seed, cfg.aem_init_scale), {}, 0, {}};
  out.policy.set_encoder_frozen(true);
  out.schedule = aem::guidance_schedule(out.aem.parameter_count(), out.policy.parameter_count(),
                                        static_cast<std::size_t>(cfg.pretrain_epochs));
  out.epochs = cfg.finetune_epochs > 0 ? cfg.finetune_epochs : static_cast<int>(out.schedule.clamped);
  const cache::ObsEmbedder embedder;
  const auto instructions = aem::training_instructions(demos, embedder, cfg.tau_sim);
  aem::FinetuneOptions opts;
  opts.epochs = out.epochs;
  opts.lr = cfg.finetune_lr;
  opts.batch = cfg.finetune_batch;
  opts.seed = cfg.seed;
  opts.drop_task_description = drop_task_description;
  out.result = aem::finetune_with_guidance(out.policy, out.aem, demos, instructions, opts);
  return out;
}

InstructorOutputBundle train_instructor(const RunConfig& cfg,
                                        const instructor::InstructionLabelSet& labels,
                                        const numerics::Tensor2& hint_table) {
  InstructorOutputBundle out{
      instructor::InstructorModel::create({cfg.instructor_hidden, cfg.latent_dim}, cfg.seed), {}};
  instructor::InstructorTrainOptions opts;
  opts.epochs = cfg.instructor_epochs;
  opts.lr = cfg.instructor_lr;
  opts.seed = cfg.seed;
  opts.hint_probability = cfg.hint_probability;
  out.result = instructor::finetune_instructor(out.model, labels, opts, hint_table);
  return out;
}

double guidance_rms(const aem::Aem& model, bool drop_task_description) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& task : env::default_tasks()) {
    const auto tokens = aem::aem_tokens(task, drop_task_description);
    for (std::size_t i = 0; i < instructor::kInstructionCount; ++i) {
      for (double v : model.guidance_embedding({tokens, i})) {
        sum += v * v;
        ++n;
      }
    }
  }
  return std::sqrt(sum / static_cast<double>(n));
}

Artifacts train_all(const RunConfig& cfg) {
  const auto demos = generate_demos(cfg);
  PretrainOutput pre = pretrain(cfg, demos);
  FinetuneOutput full = finetune(cfg, pre.policy, demos, false);
  FinetuneOutput no_task = finetune(cfg, pre.policy, demos, true);
  const auto labels = instructor::build_instruction_dataset(demos);
  const auto noise = instructor::build_uninformative_dataset(demos, cfg.seed);
  const auto& table = full.aem.instruction_table();
  InstructorOutputBundle instr = train_instructor(cfg, labels, table);
  InstructorOutputBundle instr_nm = train_instructor(cfg, noise, table);
  const double rms = guidance_rms(full.aem, false);
  return Artifacts{std::move(pre.policy), std::move(full), std::move(no_task), std::move(instr),
                   std::move(instr_nm), rms, std::move(pre.epoch_loss)};
}

}  // namespace guides::harness
