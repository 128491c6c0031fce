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

#include "guides/instructor/model.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "guides/numerics/ops.hpp"

namespace guides::instructor {

using numerics::Mlp2;

namespace {

Mlp2 named_mlp() {
  return {{"instructor.fc1.weight", "instructor.fc1.bias"},
          {"instructor.fc2.weight", "instructor.fc2.bias"}};
}

std::string zone_slot_name(std::size_t z) {
  return z == env::kFloorSlot ? "floor" : std::string(env::zone_name(static_cast<env::Zone>(z)));
}

std::string relation(int d) {
  if (d == 0) return "at";
  if (d == 1) return "adjacent";
  if (d <= 3) return "near";
  return "far";
}

std::string robot_text(const env::ObservationView& v) {
  return std::string("gripper ") + (v.gripper_closed() ? "closed" : "open") + ", " +
         (v.holding() ? "holding" : "empty") + ", eef in " + zone_slot_name(v.eef_zone());
}

std::string scene_text(const env::ObservationView& v) {
  std::vector<std::string> reach;
  for (std::size_t i = 0; i < env::kMaxObjects; ++i) {
    const auto s = v.slot(i);
    if (s.present && s.in_reach) reach.push_back(zone_slot_name(s.zone));
  }
  std::sort(reach.begin(), reach.end());
  std::string out = std::to_string(reach.size()) + " in reach";
  if (!reach.empty()) {
    out += " (";
    for (std::size_t i = 0; i < reach.size(); ++i) out += (i ? " " : "") + reach[i];
    out += ")";
  }
  if (const auto n = v.nearest_slot()) {
    const auto s = v.slot(*n);
    out += ", nearest " + std::string(env::appearance_name(s.appearance)) + " " +
           relation(std::max(std::abs(s.dx), std::abs(s.dy))) + " in " + zone_slot_name(s.zone);
  } else {
    out += ", nothing visible";
  }
  return out;
}

}  // namespace

InstructorModel::InstructorModel(ParamStore params, std::size_t context)
    : params_(std::move(params)), context_(context), mlp_(named_mlp()) {}

InstructorModel InstructorModel::create(const InstructorConfig& cfg, std::uint64_t seed) {
  if (cfg.hidden == 0) throw std::invalid_argument("InstructorConfig: hidden must be positive");
  numerics::Rng rng(numerics::mix_seed(seed, 0x1257));
  ParamStore store;
  Mlp2::create(store, "instructor", env::kObsDim + env::kWordCount + cfg.context, cfg.hidden,
               kInstructionCount, rng);
  return InstructorModel(std::move(store), cfg.context);
}

InstructorModel InstructorModel::from_params(ParamStore params) {
  const std::size_t in = params.value("instructor.fc1.weight").rows();
  if (in < env::kObsDim + env::kWordCount ||
      params.value("instructor.fc2.weight").cols() != kInstructionCount) {
    throw std::invalid_argument("InstructorModel::from_params: inconsistent block shapes");
  }
  return InstructorModel(std::move(params), in - env::kObsDim - env::kWordCount);
}

void InstructorModel::write_input(std::span<double> row, const env::Observation& obs,
                                  std::span<const int> tokens,
                                  std::span<const double> context) const {
  if (row.size() != input_width()) throw std::invalid_argument("instructor: bad input row width");
  if (obs.features.size() != env::kObsDim) {
    throw std::invalid_argument("instructor: observation width mismatch");
  }
  if (!context.empty() && context.size() != context_) {
    throw std::invalid_argument("instructor: context width " + std::to_string(context.size()) +
                                ", expected " + std::to_string(context_));
  }
  std::fill(row.begin(), row.end(), 0.0);
  std::copy(obs.features.begin(), obs.features.end(), row.begin());
  for (int w : tokens) {
    if (w < 0 || static_cast<std::size_t>(w) >= env::kWordCount) {
      throw std::invalid_argument("instructor: token out of range");
    }
    row[env::kObsDim + static_cast<std::size_t>(w)] += 1.0;
  }
  std::copy(context.begin(), context.end(), row.begin() + env::kObsDim + env::kWordCount);
}

Tensor2 InstructorModel::forward(const Tensor2& inputs, Mlp2::Trace* trace) const {
  return mlp_.forward(params_, inputs, trace);
}

void InstructorModel::backward(const Mlp2::Trace& trace, const Tensor2& dlogits) {
  mlp_.backward(params_, trace, dlogits, false);
}

std::vector<double> InstructorModel::logits(const env::Observation& obs,
                                            std::span<const int> tokens,
                                            std::span<const double> context) const {
  Tensor2 x(1, input_width());
  write_input(x.row(0), obs, tokens, context);
  const Tensor2 y = forward(x);
  return {y.values().begin(), y.values().end()};
}

bool is_heldout(int task_id, int episode, double fraction, std::uint64_t seed) {
  const std::uint64_t h = numerics::mix_seed(numerics::mix_seed(seed, static_cast<std::uint64_t>(task_id)),
                                             static_cast<std::uint64_t>(episode));
  return static_cast<double>(h >> 11) * 0x1.0p-53 < fraction;
}

InstructorTrainResult finetune_instructor(InstructorModel& model, const InstructionLabelSet& labels,
                                          const InstructorTrainOptions& options,
                                          const Tensor2& hint_table) {
  if (labels.empty()) throw std::invalid_argument("finetune_instructor: empty label set");
  if (options.epochs < 1 || options.batch == 0) {
    throw std::invalid_argument("finetune_instructor: epochs and batch must be >= 1");
  }
  const bool hints = !hint_table.empty() && options.hint_probability > 0.0;
  if (hints && (hint_table.rows() != kInstructionCount ||
                hint_table.cols() != model.context_width())) {
    throw std::invalid_argument("finetune_instructor: hint table shape mismatch");
  }
  std::vector<std::size_t> train, held;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (is_heldout(labels[i].task_id, labels[i].episode, options.holdout_fraction, options.seed)
         ? held
         : train)
        .push_back(i);
  }
  if (train.empty()) throw std::invalid_argument("finetune_instructor: no training examples");

  numerics::Rng rng(numerics::mix_seed(options.seed, 0x7EA));
  InstructorTrainResult result;
  const std::size_t width = model.input_width();
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(train));
    double total = 0.0;
    for (std::size_t start = 0; start < train.size(); start += options.batch) {
      const std::size_t n = std::min(options.batch, train.size() - start);
      Tensor2 x(n, width);
      std::vector<std::size_t> targets;
      for (std::size_t i = 0; i < n; ++i) {
        const LabeledExample& ex = labels[train[start + i]];
        std::span<const double> ctx;
        if (hints && rng.uniform() < options.hint_probability) ctx = hint_table.row(ex.label);
        model.write_input(x.row(i), ex.obs, ex.task_tokens, ctx);
        targets.push_back(ex.label);
      }
      Mlp2::Trace trace;
      const auto ce = numerics::cross_entropy_batch(model.forward(x, &trace), targets);
      total += ce.mean_loss * static_cast<double>(n);
      model.params().zero_grad();
      model.backward(trace, ce.grad_logits);
      numerics::sgd_step(model.params(), options.lr);
    }
    result.epoch_loss.push_back(total / static_cast<double>(train.size()));
  }
  std::size_t correct = 0;
  for (std::size_t i : held) {
    const auto& ex = labels[i];
    correct += numerics::argmax(model.logits(ex.obs, ex.task_tokens)) == ex.label;
  }
  result.heldout_examples = held.size();
  result.heldout_accuracy = held.empty() ? 0.0 : static_cast<double>(correct) / held.size();
  return result;
}

double confidence(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw std::invalid_argument("confidence: no token rows");
  double total = 0.0;
  for (const auto& row : rows) {
    const auto p = numerics::softmax(row);
    total += *std::max_element(p.begin(), p.end());
  }
  return total / static_cast<double>(rows.size());
}

std::string render_condition(const env::Observation& obs) {
  const env::ObservationView v(obs);
  return robot_text(v) + "; " + scene_text(v);
}

InstructorOutput instruct(const InstructorModel& model, const env::Observation& obs,
                          const env::TaskSpec& task, std::optional<std::span<const double>> context) {
  std::span<const double> ctx;
  if (context) {
    if (context->size() != model.context_width()) {
      throw std::invalid_argument("instruct: context width " + std::to_string(context->size()) +
                                  ", expected " + std::to_string(model.context_width()));
    }
    ctx = *context;
  }
  const std::vector<double> row = model.logits(obs, task.tokens, ctx);
  InstructorOutput out;
  out.instruction = numerics::argmax(row);
  out.confidence = confidence(std::span<const std::vector<double>>(&row, 1));
  const env::ObservationView v(obs);
  out.condition = robot_text(v) + "; " + scene_text(v);
  char conf[32];
  std::snprintf(conf, sizeof(conf), "%.3f", out.confidence);
  out.trace = {"task: " + env::describe_text(task),
               "propose: " + instruction_name(out.instruction) + " at confidence " + conf,
               "robot: " + robot_text(v), "scene: " + scene_text(v)};
  return out;
}

}  // namespace guides::instructor
