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

#include "guides/aem/aem.hpp"
#include "guides/instructor/labels.hpp"
#include "test_support.hpp"

using namespace guides;
using namespace guides::aem;

namespace {

policy::PolicyConfig tiny() {
  policy::PolicyConfig c;
  c.encoder_hidden = 24;
  c.latent = 8;
  c.decoder_hidden = 12;
  return c;
}

}  // namespace

TEST(Aem, SquaredNormGradientMatchesFiniteDifferences) {
  Aem a = Aem::create(6, 3, 2.0);
  const std::vector<int> tokens = {0, 3, 7, 12};
  const GuidanceInput in{tokens, 5};
  Aem::Trace trace;
  const auto g = a.guidance_embedding(in, &trace);
  std::vector<double> dg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) dg[i] = 2 * g[i];
  a.params().zero_grad();
  a.backward(trace, dg);
  auto loss = [&] {
    double s = 0;
    for (double v : a.guidance_embedding(in)) s += v * v;
    return s;
  };
  guides::testing::expect_param_grads(loss, a.params(), a.params().names());
}

TEST(Aem, TokenOrderDoesNotMatter) {
  const Aem a = Aem::create(8, 1);
  const std::vector<int> t1 = {0, 2, 9, 13};
  const std::vector<int> t2 = {13, 9, 0, 2};
  const auto g1 = a.guidance_embedding({t1, 3});
  const auto g2 = a.guidance_embedding({t2, 3});
  for (std::size_t i = 0; i < g1.size(); ++i) EXPECT_NEAR(g1[i], g2[i], 1e-12);
  EXPECT_THROW(a.guidance_embedding({t1, instructor::kInstructionCount}), std::invalid_argument);
}

TEST(Aem, ZeroModuleReducesToUnguidedForward) {
  const auto p = policy::Policy::create(tiny(), 2);
  Aem a = Aem::create(8, 4);
  for (const auto& n : a.params().names()) {
    for (double& v : a.params().value(n).values()) v = 0.0;
  }
  const auto& task = env::default_tasks()[0];
  const auto obs = env::observe(env::reset(task, 1));
  EXPECT_EQ(guided_forward(p, a, obs, {task.tokens, 4}), p.logits(obs));
}

TEST(Fuse, IsElementwiseAddition) {
  const std::vector<double> a = {1.0, -2.0, 0.5};
  const std::vector<double> b = {0.25, 4.0, -0.5};
  const std::vector<double> z(3, 0.0);
  EXPECT_EQ(fuse(a, z), a);
  EXPECT_EQ(fuse(z, b), b);
  EXPECT_EQ(fuse(a, b), fuse(b, a));
  EXPECT_EQ(fuse(a, b), (std::vector<double>{1.25, 2.0, 0.0}));
  EXPECT_THROW(fuse(a, std::vector<double>(2)), std::invalid_argument);
}

TEST(Schedule, ProportionalRuleAndClamp) {
  const auto s = guidance_schedule(80'000, 10'000'000, 1000);
  EXPECT_EQ(s.raw, 8u);
  EXPECT_EQ(s.clamped, 8u);
  const auto full = guidance_schedule(500, 500, 50);
  EXPECT_EQ(full.raw, 50u);
  EXPECT_EQ(full.clamped, 5u);
  EXPECT_EQ(guidance_schedule(1, 1'000'000'000, 100).clamped, 1u);
  EXPECT_EQ(guidance_schedule(0, 10, 3).clamped, 1u);
  EXPECT_EQ(guidance_schedule(10, 10, 1).clamped, 1u);
  EXPECT_THROW(guidance_schedule(1, 0, 10), std::invalid_argument);
  EXPECT_THROW(guidance_schedule(1, 10, 0), std::invalid_argument);
}

TEST(RandomGuidance, MatchesTargetRms) {
  numerics::Rng rng(31);
  EXPECT_EQ(random_guidance(5, 0.0, rng), std::vector<double>(5, 0.0));
  double sq = 0, sum = 0;
  std::size_t n = 0;
  for (int draw = 0; draw < 10000; ++draw) {
    for (double v : random_guidance(32, 0.7, rng)) {
      sq += v * v;
      sum += v;
      ++n;
    }
  }
  EXPECT_NEAR(std::sqrt(sq / n), 0.7, 0.05 * 0.7);
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_THROW(random_guidance(4, -1.0, rng), std::invalid_argument);
}

TEST(TrainingInstructions, ReduceToStageOneLabelsWithoutReuse) {
  const auto demos = env::generate_demonstrations(env::default_tasks(), 2, 6);
  const cache::ObsEmbedder emb;
  const auto labels = instructor::build_instruction_dataset(demos);
  const auto every = training_instructions(demos, emb, 1.0);
  ASSERT_EQ(every.size(), labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) EXPECT_EQ(every[i], labels[i].label);
  EXPECT_EQ(training_instructions(demos, emb, 0.95).size(), labels.size());
}

TEST(Finetune, FreezesEncoderAndLowersLoss) {
  const auto demos = env::generate_demonstrations(env::default_tasks(), 8, 10);
  policy::Policy p = policy::Policy::create(tiny(), 6);
  policy::pretrain_bc(p, demos, {4, 0.05, 16, 6});
  Aem a = Aem::create(8, 6, 4.0);
  const auto instr = training_instructions(demos, cache::ObsEmbedder{}, 0.95);
  FinetuneOptions opts;
  opts.epochs = 3;
  EXPECT_THROW(finetune_with_guidance(p, a, demos, instr, opts), std::logic_error);
  p.set_encoder_frozen(true);
  std::map<std::string, std::vector<double>> before;
  for (const auto& b : p.encoder_blocks()) {
    const auto v = p.params().value(b).values();
    before[b].assign(v.begin(), v.end());
  }
  const auto r = finetune_with_guidance(p, a, demos, instr, opts);
  ASSERT_EQ(r.epoch_loss.size(), 3u);
  EXPECT_LT(r.epoch_loss.back(), r.initial_loss);
  for (const auto& b : p.encoder_blocks()) {
    const auto v = p.params().value(b).values();
    EXPECT_TRUE(std::equal(v.begin(), v.end(), before[b].begin())) << b;
  }
  const auto& task = env::default_tasks()[0];
  const auto obs = env::observe(env::reset(task, 2));
  EXPECT_NE(guided_forward(p, a, obs, {task.tokens, 0}), guided_forward(p, a, obs, {task.tokens, 4}));
  EXPECT_THROW(finetune_with_guidance(p, a, demos, std::span(instr).first(3), opts),
               std::invalid_argument);
}

TEST(AemTokens, DropUsesSinglePad) {
  const auto& task = env::default_tasks()[2];
  EXPECT_EQ(aem_tokens(task, false), task.tokens);
  EXPECT_EQ(aem_tokens(task, true), (std::vector<int>{static_cast<int>(env::Word::pad)}));
}
