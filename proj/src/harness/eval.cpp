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

#include "guides/harness/eval.hpp"

#include <stdexcept>

namespace guides::harness {

std::string_view split_name(Split s) { return s == Split::hard ? "hard" : "ambiguous"; }

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::no_motion_ft: return "no_motion_ft";
    case Variant::no_task_desc: return "no_task_desc";
    case Variant::random_g: return "random_g";
  }
  throw std::invalid_argument("variant_name: bad variant");
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::no_motion_ft, Variant::no_task_desc, Variant::random_g}) {
    if (variant_name(v) == name) return v;
  }
  throw std::invalid_argument("unknown ablation variant '" + std::string(name) + "'");
}

void SuccessReport::append(const SuccessReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

double pooled_rate(const SuccessReport& r, std::string_view condition,
                   std::optional<std::string_view> split, std::optional<std::uint64_t> seed) {
  long episodes = 0, successes = 0;
  for (const auto& row : r.rows) {
    if (row.condition != condition) continue;
    if (split && row.split != *split) continue;
    if (seed && row.seed != *seed) continue;
    episodes += row.episodes;
    successes += row.successes;
  }
  return episodes == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(episodes);
}

std::uint64_t episode_seed(std::uint64_t eval_seed, Split split, const env::TaskSpec& task,
                           int episode) {
  const std::uint64_t base =
      numerics::mix_seed(numerics::mix_seed(eval_seed, 0xE7A1), static_cast<std::uint64_t>(split));
  return env::layout_seed(base, task, episode);
}

namespace {

void check_components(const EvalComponents& c) {
  auto fail = [&](const std::string& m) {
    throw std::invalid_argument("run_eval(" + c.condition + "): " + m);
  };
  if (c.policy == nullptr) fail("a policy is required");
  const bool guided = c.aem != nullptr || c.random_rms > 0.0;
  if (!guided && (c.instructor != nullptr || c.log != nullptr)) {
    fail("unguided evaluation takes no instructor or log");
  }
  if (guided && c.instructor == nullptr) fail("guided evaluation needs an instructor");
  if (c.aem == nullptr && c.random_rms <= 0.0 && guided) fail("guided evaluation needs an AEM");
  if (c.log != nullptr && c.context_table == nullptr) fail("the Reflector needs a context table");
  if (c.aem != nullptr && c.aem->dim() != c.policy->config().latent) {
    fail("AEM width does not match the policy latent");
  }
}

}  // namespace

SuccessReport run_eval(const EvalComponents& c, const RunConfig& cfg, Split split,
                       std::uint64_t seed, int episodes_per_task) {
  check_components(c);
  if (episodes_per_task < 1) throw std::invalid_argument("run_eval: episodes_per_task must be >= 1");
  const env::EnvConfig ecfg = cfg.env();
  const bool guided = c.aem != nullptr || c.random_rms > 0.0;
  const cache::ObsEmbedder embedder;
  const auto rcfg = cfg.reflector();
  env::ResetOptions ro;
  ro.hard = split == Split::hard;
  if (ro.hard) ro.decoy_first = true;

  SuccessReport report;
  for (const auto& task : env::default_tasks()) {
    ReportRow row;
    row.condition = c.condition;
    row.split = split_name(split);
    row.seed = seed;
    row.task_id = task.id;
    const auto tokens = aem::aem_tokens(task, c.drop_task_description);
    long total_steps = 0;
    for (int ep = 0; ep < episodes_per_task; ++ep) {
      const std::uint64_t es = episode_seed(seed, split, task, ep);
      env::WorldState state = env::reset(task, es, ecfg, ro);
      numerics::Rng noise(numerics::mix_seed(es, 0x6A55));
      cache::SimilarityCache<instructor::InstructorOutput> cache(embedder, cfg.tau_sim);
      reflector::EpisodeRecorder recorder;
      std::vector<double> g;
      while (!env::is_success(state, task, ecfg) && state.t < ecfg.horizon) {
        const env::Observation obs = env::observe(state, ecfg);
        std::vector<double> latent = c.policy->encode(obs);
        if (guided) {
          const auto query = [&](const env::Observation& o) {
            if (c.log == nullptr) return instructor::instruct(*c.instructor, o, task);
            auto rr = reflector::reflect_loop(*c.instructor, o, task, *c.log, *c.context_table, rcfg);
            row.reflect_triggers += rr.rounds > 0 ? 1 : 0;
            row.reflect_rounds += static_cast<std::size_t>(rr.rounds);
            return rr.output;
          };
          const auto res = cache.get_or_query(obs, query);
          if (c.log != nullptr && res.was_query) {
            recorder.add(instructor::render_condition(obs), res.output.instruction,
                         res.output.confidence, task.id, state.t);
          }
          // Random guidance stands in for the AEM output, so it is redrawn only
          // when the instructor is actually queried.
          if (c.random_rms == 0.0) {
            g = c.aem->guidance_embedding({tokens, res.output.instruction});
          } else if (res.was_query) {
            g = aem::random_guidance(latent.size(), c.random_rms, noise);
          }
          latent = aem::fuse(latent, g);
        }
        state = env::step(state, policy::select_action(c.policy->decode(latent)), ecfg);
      }
      const bool success = env::is_success(state, task, ecfg);
      if (c.log != nullptr) recorder.flush(*c.log, success);
      row.episodes += 1;
      row.successes += success ? 1 : 0;
      total_steps += state.t;
      row.steps += cache.stats().steps;
      row.queries += cache.stats().queries;
      row.hits += cache.stats().hits;
    }
    row.mean_steps = static_cast<double>(total_steps) / row.episodes;
    report.rows.push_back(std::move(row));
  }
  return report;
}

EvalComponents standard_components(const Artifacts& a, std::string_view condition,
                                   reflector::ExecutionLog* log) {
  EvalComponents c;
  c.condition = condition;
  if (condition == "unguided") {
    c.policy = &a.pretrained;
    return c;
  }
  c.policy = &a.full.policy;
  c.aem = &a.full.aem;
  c.instructor = &a.instructor.model;
  if (condition == "guided") return c;
  if (condition == "reflector") {
    if (log == nullptr) throw std::invalid_argument("reflector condition needs an execution log");
    c.log = log;
    c.context_table = &a.full.aem.instruction_table();
    return c;
  }
  throw std::invalid_argument("unknown condition '" + std::string(condition) + "'");
}

EvalComponents ablation_components(const Artifacts& a, Variant v) {
  EvalComponents c = standard_components(a, "guided");
  c.condition = variant_name(v);
  switch (v) {
    case Variant::no_motion_ft: c.instructor = &a.instructor_no_motion.model; break;
    case Variant::no_task_desc:
      c.policy = &a.no_task.policy;
      c.aem = &a.no_task.aem;
      c.drop_task_description = true;
      break;
    case Variant::random_g:
      c.aem = nullptr;
      c.random_rms = a.g_rms;
      break;
  }
  return c;
}

ReportMeta report_meta(const Artifacts& a) {
  return {a.full.aem.parameter_count(), a.full.policy.parameter_count(), a.full.schedule.raw,
          a.full.schedule.clamped};
}

SuccessReport run_ablation(Variant v, const Artifacts& a, const RunConfig& cfg,
                           std::uint64_t seed) {
  SuccessReport r = run_eval(ablation_components(a, v), cfg, Split::ambiguous, seed,
                             cfg.episodes_per_task);
  r.meta = report_meta(a);
  return r;
}

}  // namespace guides::harness
