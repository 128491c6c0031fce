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
#include <string>
#include <vector>

#include "guides/harness/pipeline.hpp"

namespace guides::harness {

enum class Split { ambiguous, hard };
std::string_view split_name(Split s);

enum class Variant { no_motion_ft, no_task_desc, random_g };
std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

/// What one evaluation condition runs with. Unguided uses only the policy.
struct EvalComponents {
  std::string condition;
  const policy::Policy* policy = nullptr;
  const aem::Aem* aem = nullptr;
  const instructor::InstructorModel* instructor = nullptr;
  /// Non-null enables the Reflector; the log is read and written.
  reflector::ExecutionLog* log = nullptr;
  bool drop_task_description = false;
  /// Positive: ignore the AEM output and inject Gaussian noise at this RMS.
  double random_rms = 0.0;
  const numerics::Tensor2* context_table = nullptr;
};

struct ReportRow {
  std::string condition;
  std::string split;
  std::uint64_t seed = 0;
  int task_id = 0;
  int episodes = 0;
  int successes = 0;
  double mean_steps = 0.0;
  std::size_t steps = 0;
  std::size_t queries = 0;
  std::size_t hits = 0;
  std::size_t reflect_triggers = 0;
  std::size_t reflect_rounds = 0;
  double rate() const { return episodes == 0 ? 0.0 : static_cast<double>(successes) / episodes; }
  bool operator==(const ReportRow&) const = default;
};

struct ReportMeta {
  std::size_t n_eta = 0;
  std::size_t n_theta = 0;
  std::size_t e_eta_raw = 0;
  std::size_t e_eta_clamped = 0;
  double ratio() const { return n_theta == 0 ? 0.0 : static_cast<double>(n_eta) / n_theta; }
  bool operator==(const ReportMeta&) const = default;
};

struct SuccessReport {
  ReportMeta meta;
  std::vector<ReportRow> rows;
  void append(const SuccessReport& other);
  bool operator==(const SuccessReport&) const = default;
};

/// Pooled success rate over rows matching condition (and split when given).
double pooled_rate(const SuccessReport& r, std::string_view condition,
                   std::optional<std::string_view> split = std::nullopt,
                   std::optional<std::uint64_t> seed = std::nullopt);

std::uint64_t episode_seed(std::uint64_t eval_seed, Split split, const env::TaskSpec& task,
                           int episode);

SuccessReport run_eval(const EvalComponents& c, const RunConfig& cfg, Split split,
                       std::uint64_t seed, int episodes_per_task);

/// Components for the named standard conditions: unguided, guided, reflector.
EvalComponents standard_components(const Artifacts& a, std::string_view condition,
                                   reflector::ExecutionLog* log = nullptr);
EvalComponents ablation_components(const Artifacts& a, Variant v);
ReportMeta report_meta(const Artifacts& a);

SuccessReport run_ablation(Variant v, const Artifacts& a, const RunConfig& cfg,
                           std::uint64_t seed);

}  // namespace guides::harness
