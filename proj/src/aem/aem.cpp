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

#include "guides/aem/aem.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "guides/instructor/labels.hpp"
#include "guides/numerics/ops.hpp"

namespace guides::aem {

using numerics::CrossAttention;
using numerics::Mlp2;

Aem::Aem(ParamStore params)
    : params_(std::move(params)),
      attn_{"aem.attn.wq", "aem.attn.wk", "aem.attn.wv"},
      ffn_{{"aem.ffn.fc1.weight", "aem.ffn.fc1.bias"}, {"aem.ffn.fc2.weight", "aem.ffn.fc2.bias"}} {}

Aem Aem::create(std::size_t dim, std::uint64_t seed, double output_scale, std::size_t instructions,
                std::size_t words) {
  if (dim == 0 || instructions == 0 || words == 0) {
    throw std::invalid_argument("Aem::create: sizes must be positive");
  }
  numerics::Rng rng(numerics::mix_seed(seed, 0xAE77));
  ParamStore store;
  store.add("aem.instruction_table", numerics::glorot(instructions, dim, rng));
  store.add("aem.word_table", numerics::glorot(words, dim, rng));
  CrossAttention::create(store, "aem.attn", dim, rng);
  Mlp2::create(store, "aem.ffn", dim, 2 * dim, dim, rng);
  for (double& w : store.value("aem.ffn.fc2.weight").values()) w *= output_scale;
  return Aem(std::move(store));
}

Aem Aem::from_params(ParamStore params) {
  const std::size_t d = params.value("aem.instruction_table").cols();
  if (params.value("aem.word_table").cols() != d || params.value("aem.attn.wq").rows() != d ||
      params.value("aem.ffn.fc2.weight").cols() != d) {
    throw std::invalid_argument("Aem::from_params: inconsistent block shapes");
  }
  return Aem(std::move(params));
}

std::vector<double> Aem::guidance_embedding(const GuidanceInput& in, Trace* trace) const {
  const Tensor2& instr = params_.value(instr_table_);
  const Tensor2& words = params_.value(word_table_);
  if (in.instruction >= instr.rows()) {
    throw std::invalid_argument("guidance_embedding: instruction " +
                                std::to_string(in.instruction) + " out of range");
  }
  if (in.task_tokens.empty()) throw std::invalid_argument("guidance_embedding: no task tokens");
  std::vector<std::size_t> rows;
  for (int w : in.task_tokens) {
    if (w < 0 || static_cast<std::size_t>(w) >= words.rows()) {
      throw std::invalid_argument("guidance_embedding: token " + std::to_string(w) +
                                  " out of range");
    }
    rows.push_back(static_cast<std::size_t>(w));
  }
  const std::size_t qrow[1] = {in.instruction};
  const Tensor2 q = numerics::gather_rows(instr, qrow);
  const Tensor2 ctx = numerics::gather_rows(words, rows);
  Tensor2 h = attn_.forward(params_, q, ctx, trace ? &trace->attn : nullptr);
  numerics::add_inplace(h, q);
  const Tensor2 g = ffn_.forward(params_, h, trace ? &trace->ffn : nullptr);
  if (trace) {
    trace->tokens = std::move(rows);
    trace->instruction = in.instruction;
  }
  return {g.values().begin(), g.values().end()};
}

void Aem::backward(const Trace& trace, std::span<const double> dg) {
  const Tensor2 dh = ffn_.backward(params_, trace.ffn, Tensor2::from_row(dg), true);
  const auto grads = attn_.backward(params_, trace.attn, dh);
  Tensor2 dq = grads.query;
  numerics::add_inplace(dq, dh);
  const std::size_t qrow[1] = {trace.instruction};
  params_.accumulate_grad_rows(instr_table_, qrow, dq);
  params_.accumulate_grad_rows(word_table_, trace.tokens, grads.context);
}

std::vector<double> fuse(std::span<const double> latent, std::span<const double> g) {
  if (latent.size() != g.size()) {
    throw std::invalid_argument("fuse: length mismatch " + std::to_string(latent.size()) +
                                " vs " + std::to_string(g.size()));
  }
  std::vector<double> out(latent.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = latent[i] + g[i];
  return out;
}

std::vector<double> guided_logits(const policy::Policy& policy, std::span<const double> latent,
                                  std::span<const double> g) {
  return policy.decode(fuse(latent, g));
}

std::vector<double> guided_forward(const policy::Policy& policy, const Aem& aem,
                                   const env::Observation& obs, const GuidanceInput& in) {
  return guided_logits(policy, policy.encode(obs), aem.guidance_embedding(in));
}

Schedule guidance_schedule(std::size_t n_eta, std::size_t n_theta, std::size_t epochs) {
  if (n_theta == 0) throw std::invalid_argument("guidance_schedule: n_theta must be positive");
  if (epochs == 0) throw std::invalid_argument("guidance_schedule: E must be >= 1");
  Schedule s;
  s.raw = (n_eta * epochs + n_theta - 1) / n_theta;
  const std::size_t upper = (epochs + 9) / 10;
  s.clamped = std::clamp<std::size_t>(s.raw, 1, upper);
  return s;
}

std::vector<std::size_t> training_instructions(std::span<const env::Trajectory> demos,
                                               const cache::ObsEmbedder& embedder,
                                               double tau_sim) {
  std::vector<std::size_t> out;
  for (const auto& traj : demos) {
    const env::TaskSpec& task = env::task_by_id(traj.task_id);
    std::vector<double> last;
    std::size_t label = 0;
    for (std::size_t t = 0; t < traj.steps.size(); ++t) {
      const env::Step& s = traj.steps[t];
      if (!s.delta) throw std::invalid_argument("training_instructions: step without delta");
      std::vector<double> e = embedder.embed(s.obs);
      if (t == 0 || cache::cosine_sim(e, last) <= tau_sim) {
        const bool holding =
            s.state ? s.state->held.has_value() : env::ObservationView(s.obs).holding();
        label = instructor::stage1_label(holding, *s.delta, task);
      }
      last = std::move(e);
      out.push_back(label);
    }
  }
  return out;
}

std::vector<int> aem_tokens(const env::TaskSpec& task, bool drop_task_description) {
  if (drop_task_description) return {static_cast<int>(env::Word::pad)};
  return task.tokens;
}

FinetuneResult finetune_with_guidance(policy::Policy& policy, Aem& aem,
                                      std::span<const env::Trajectory> demos,
                                      std::span<const std::size_t> instructions,
                                      const FinetuneOptions& options) {
  if (!policy.encoder_frozen()) {
    throw std::logic_error("finetune_with_guidance: encoder blocks must be frozen");
  }
  if (options.epochs < 1 || options.batch == 0) {
    throw std::invalid_argument("finetune_with_guidance: epochs and batch must be >= 1");
  }
  struct Sample {
    std::size_t action;
    std::size_t instruction;
    const std::vector<int>* tokens;
  };
  std::vector<std::vector<int>> task_tokens;
  for (const auto& task : env::default_tasks()) {
    task_tokens.push_back(aem_tokens(task, options.drop_task_description));
  }
  std::size_t total_steps = 0;
  for (const auto& traj : demos) total_steps += traj.steps.size();
  if (total_steps != instructions.size()) {
    throw std::invalid_argument("finetune_with_guidance: " + std::to_string(instructions.size()) +
                                " instructions for " + std::to_string(total_steps) + " steps");
  }
  std::vector<std::vector<double>> obs;
  std::vector<Sample> samples;
  for (const auto& traj : demos) {
    env::task_by_id(traj.task_id);
    for (const auto& s : traj.steps) {
      obs.push_back(s.obs.features);
      samples.push_back({static_cast<std::size_t>(s.action), instructions[samples.size()],
                         &task_tokens[static_cast<std::size_t>(traj.task_id)]});
    }
  }
  if (samples.empty()) throw std::invalid_argument("finetune_with_guidance: no samples");

  // The encoder is frozen, so latents are computed once.
  Tensor2 latents(obs.size(), policy.config().latent);
  for (std::size_t start = 0; start < obs.size(); start += 512) {
    const std::size_t end = std::min(obs.size(), start + 512);
    const Tensor2 z = policy.encode(numerics::stack_rows(
        std::span<const std::vector<double>>(obs.data() + start, end - start)));
    std::copy(z.values().begin(), z.values().end(), latents.row(start).begin());
  }

  auto batch_forward = [&](std::span<const std::size_t> idx, std::vector<Aem::Trace>* traces,
                           numerics::Mlp2::Trace* dec_trace) {
    Tensor2 fused(idx.size(), latents.cols());
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const Sample& s = samples[idx[i]];
      Aem::Trace* tr = traces ? &(*traces)[i] : nullptr;
      const auto g = aem.guidance_embedding({*s.tokens, s.instruction}, tr);
      const auto z = latents.row(idx[i]);
      for (std::size_t c = 0; c < fused.cols(); ++c) fused(i, c) = z[c] + g[c];
      targets.push_back(s.action);
    }
    return numerics::cross_entropy_batch(policy.decode(fused, dec_trace), targets);
  };

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  FinetuneResult result;
  {
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += 256) {
      const std::size_t n = std::min<std::size_t>(256, order.size() - start);
      total += batch_forward(std::span(order).subspan(start, n), nullptr, nullptr).mean_loss * n;
    }
    result.initial_loss = total / static_cast<double>(order.size());
  }

  numerics::Rng rng(numerics::mix_seed(options.seed, 0xF17E));
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch) {
      const std::size_t n = std::min(options.batch, order.size() - start);
      const auto idx = std::span<const std::size_t>(order).subspan(start, n);
      std::vector<Aem::Trace> traces(n);
      numerics::Mlp2::Trace dec_trace;
      const auto ce = batch_forward(idx, &traces, &dec_trace);
      total += ce.mean_loss * static_cast<double>(n);
      policy.params().zero_grad();
      aem.params().zero_grad();
      const Tensor2 dz = policy.decode_backward(dec_trace, ce.grad_logits);
      for (std::size_t i = 0; i < n; ++i) aem.backward(traces[i], dz.row(i));
      numerics::sgd_step(policy.params(), options.lr);
      numerics::sgd_step(aem.params(), options.lr);
    }
    result.epoch_loss.push_back(total / static_cast<double>(order.size()));
  }
  return result;
}

std::vector<double> random_guidance(std::size_t dim, double rms, numerics::Rng& rng) {
  if (rms < 0.0) throw std::invalid_argument("random_guidance: rms must be >= 0");
  std::vector<double> g(dim);
  for (double& v : g) v = rms * rng.normal();
  return g;
}

}  // namespace guides::aem
