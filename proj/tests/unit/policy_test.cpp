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


#include <cmath>

#include "guides/numerics/ops.hpp"
#include "guides/policy/policy.hpp"
#include "test_support.hpp"

using namespace guides;
using namespace guides::policy;
using guides::testing::inner;
using guides::testing::input_fd;
using guides::testing::random_tensor;

namespace {

PolicyConfig tiny() {
  PolicyConfig c;
  c.encoder_hidden = 16;
  c.latent = 6;
  c.decoder_hidden = 10;
  return c;
}

}  // namespace

TEST(Policy, DecoderGradientsMatchFiniteDifferences) {
  Policy p = Policy::create(tiny(), 3);
  numerics::Rng rng(4);
  Tensor2 z = random_tensor(3, 6, rng);
  const Tensor2 r = random_tensor(3, env::kActionCount, rng);
  auto loss = [&] { return inner(p.decode(z), r); };
  numerics::Mlp2::Trace trace;
  p.decode(z, &trace);
  p.params().zero_grad();
  const Tensor2 dz = p.decode_backward(trace, r);
  guides::testing::expect_param_grads(loss, p.params(), p.decoder_blocks());
  EXPECT_LT(numerics::max_relative_error(dz, input_fd(loss, z)), 1e-4);
}

TEST(Policy, ParameterRoundTripKeepsLogits) {
  const Policy p = Policy::create(tiny(), 9);
  const Policy q = Policy::from_params(p.params());
  const auto obs = env::observe(env::reset(env::default_tasks()[3], 2));
  EXPECT_EQ(p.logits(obs), q.logits(obs));
  EXPECT_EQ(q.config().latent, 6u);
  EXPECT_EQ(p.logits(obs).size(), env::kActionCount);
}

TEST(Policy, FreezingFlagsOnlyTheEncoder) {
  Policy p = Policy::create(tiny(), 1);
  EXPECT_FALSE(p.encoder_frozen());
  p.set_encoder_frozen(true);
  EXPECT_TRUE(p.encoder_frozen());
  for (const auto& b : p.decoder_blocks()) EXPECT_FALSE(p.params().frozen(b));
}

TEST(Policy, DefaultSizeKeepsGuidanceBudgetSmall) {
  const Policy p = Policy::create({}, 1);
  EXPECT_EQ(p.parameter_count(), 549415u);
}

TEST(Policy, BehaviourCloningReducesLoss) {
  const auto demos = env::generate_demonstrations(env::default_tasks(), 6, 21);
  Policy p = Policy::create(tiny(), 5);
  const auto r = pretrain_bc(p, demos, {6, 0.05, 16, 5});
  ASSERT_EQ(r.epoch_loss.size(), 6u);
  EXPECT_LT(r.epoch_loss.back(), r.epoch_loss.front());
}

TEST(SelectAction, GreedyIsArgmax) {
  const std::vector<double> logits = {0.1, 2.0, -1.0, 2.0, 0.0, 0.0, 0.0};
  EXPECT_EQ(select_action(logits), env::Action::down);
}

TEST(SelectAction, SamplingMatchesSoftmax) {
  const std::vector<double> logits = {0.5, 1.5, -0.5, 0.0, 1.0, -2.0, 0.2};
  const auto p = numerics::softmax(logits);
  numerics::Rng rng(77);
  std::vector<double> counts(logits.size(), 0.0);
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    counts[static_cast<std::size_t>(select_action(logits, SelectMode::sample, &rng))] += 1;
  }
  for (std::size_t k = 0; k < logits.size(); ++k) {
    const double se = std::sqrt(p[k] * (1 - p[k]) / n);
    EXPECT_NEAR(counts[k] / n, p[k], 5 * se + 1e-9);
  }
  EXPECT_THROW(select_action(logits, SelectMode::sample, nullptr), std::invalid_argument);
}
