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

#include "guides/policy/policy.hpp"

#include <numeric>
#include <stdexcept>

#include "guides/numerics/ops.hpp"

namespace guides::policy {

using numerics::Mlp2;

namespace {

Mlp2 named_mlp(const std::string& prefix) {
  return {{prefix + ".fc1.weight", prefix + ".fc1.bias"},
          {prefix + ".fc2.weight", prefix + ".fc2.bias"}};
}

void check_width(const Tensor2& x, std::size_t want, const char* what) {
  if (x.cols() != want) {
    throw std::invalid_argument(std::string(what) + ": expected width " + std::to_string(want) +
                                ", got " + std::to_string(x.cols()));
  }
}

}  // namespace

Policy::Policy(PolicyConfig cfg, ParamStore params)
    : cfg_(cfg),
      params_(std::move(params)),
      encoder_(named_mlp("encoder")),
      decoder_(named_mlp("decoder")) {}

Policy Policy::create(const PolicyConfig& cfg, std::uint64_t seed) {
  if (cfg.obs_dim == 0 || cfg.encoder_hidden == 0 || cfg.latent == 0 || cfg.decoder_hidden == 0) {
    throw std::invalid_argument("PolicyConfig: all widths must be positive");
  }
  numerics::Rng rng(numerics::mix_seed(seed, 0x9011C7));
  ParamStore store;
  Mlp2::create(store, "encoder", cfg.obs_dim, cfg.encoder_hidden, cfg.latent, rng);
  Mlp2::create(store, "decoder", cfg.latent, cfg.decoder_hidden, env::kActionCount, rng);
  return Policy(cfg, std::move(store));
}

Policy Policy::from_params(ParamStore params) {
  PolicyConfig cfg;
  const Tensor2& e1 = params.value("encoder.fc1.weight");
  const Tensor2& d1 = params.value("decoder.fc1.weight");
  const Tensor2& d2 = params.value("decoder.fc2.weight");
  cfg.obs_dim = e1.rows();
  cfg.encoder_hidden = e1.cols();
  cfg.latent = params.value("encoder.fc2.weight").cols();
  cfg.decoder_hidden = d1.cols();
  if (d1.rows() != cfg.latent || d2.cols() != env::kActionCount) {
    throw std::invalid_argument("Policy::from_params: inconsistent block shapes");
  }
  return Policy(cfg, std::move(params));
}

Tensor2 Policy::encode(const Tensor2& obs) const {
  check_width(obs, cfg_.obs_dim, "encode");
  return encoder_.forward(params_, obs);
}

std::vector<double> Policy::encode(const env::Observation& obs) const {
  const Tensor2 z = encode(Tensor2::from_row(obs.features));
  return {z.values().begin(), z.values().end()};
}

Tensor2 Policy::decode(const Tensor2& latent, Mlp2::Trace* trace) const {
  check_width(latent, cfg_.latent, "decode");
  return decoder_.forward(params_, latent, trace);
}

std::vector<double> Policy::decode(std::span<const double> latent) const {
  const Tensor2 y = decode(Tensor2::from_row(latent));
  return {y.values().begin(), y.values().end()};
}

Tensor2 Policy::decode_backward(const Mlp2::Trace& trace, const Tensor2& dlogits) {
  return decoder_.backward(params_, trace, dlogits, true);
}

std::vector<double> Policy::logits(const env::Observation& obs) const {
  return decode(encode(obs));
}

void Policy::set_encoder_frozen(bool frozen) {
  for (const auto& name : encoder_.blocks()) params_.set_frozen(name, frozen);
}

bool Policy::encoder_frozen() const {
  for (const auto& name : encoder_.blocks()) {
    if (!params_.frozen(name)) return false;
  }
  return true;
}

BcResult pretrain_bc(Policy& policy, std::span<const env::Trajectory> demos,
                     const BcOptions& options) {
  if (options.epochs < 1) throw std::invalid_argument("pretrain_bc: epochs must be >= 1");
  if (options.batch == 0) throw std::invalid_argument("pretrain_bc: batch must be >= 1");
  std::vector<std::vector<double>> obs;
  std::vector<std::size_t> actions;
  for (const auto& traj : demos) {
    for (const auto& s : traj.steps) {
      obs.push_back(s.obs.features);
      actions.push_back(static_cast<std::size_t>(s.action));
    }
  }
  if (obs.empty()) throw std::invalid_argument("pretrain_bc: empty demonstration set");

  Mlp2 encoder = named_mlp("encoder");
  Mlp2 decoder = named_mlp("decoder");
  ParamStore& store = policy.params();
  numerics::Rng rng(numerics::mix_seed(options.seed, 0xBC));
  std::vector<std::size_t> order(obs.size());
  std::iota(order.begin(), order.end(), 0);

  BcResult result;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch) {
      const std::size_t end = std::min(order.size(), start + options.batch);
      std::vector<std::vector<double>> rows;
      std::vector<std::size_t> targets;
      for (std::size_t i = start; i < end; ++i) {
        rows.push_back(obs[order[i]]);
        targets.push_back(actions[order[i]]);
      }
      Mlp2::Trace enc_trace, dec_trace;
      const Tensor2 z = encoder.forward(store, numerics::stack_rows(rows), &enc_trace);
      const Tensor2 logits = decoder.forward(store, z, &dec_trace);
      const auto ce = numerics::cross_entropy_batch(logits, targets);
      total += ce.mean_loss * static_cast<double>(end - start);
      store.zero_grad();
      const Tensor2 dz = decoder.backward(store, dec_trace, ce.grad_logits, true);
      encoder.backward(store, enc_trace, dz, false);
      numerics::sgd_step(store, options.lr);
    }
    result.epoch_loss.push_back(total / static_cast<double>(obs.size()));
  }
  return result;
}

env::Action select_action(std::span<const double> logits, SelectMode mode, numerics::Rng* rng) {
  if (logits.size() != env::kActionCount) {
    throw std::invalid_argument("select_action: expected 7 logits");
  }
  if (mode == SelectMode::greedy) return static_cast<env::Action>(numerics::argmax(logits));
  if (rng == nullptr) throw std::invalid_argument("select_action: sampling needs an Rng");
  const auto p = numerics::softmax(logits);
  double u = rng->uniform();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (u < p[i]) return static_cast<env::Action>(i);
    u -= p[i];
  }
  return static_cast<env::Action>(p.size() - 1);
}

RolloutResult rollout_unguided(const Policy& policy, const env::TaskSpec& task,
                               env::WorldState state, const env::EnvConfig& cfg) {
  RolloutResult r;
  while (!env::is_success(state, task, cfg) && state.t < cfg.horizon) {
    state = env::step(state, select_action(policy.logits(env::observe(state, cfg))), cfg);
  }
  r.success = env::is_success(state, task, cfg);
  r.steps = state.t;
  return r;
}

}  // namespace guides::policy
