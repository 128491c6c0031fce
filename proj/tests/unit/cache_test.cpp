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

#include "guides/cache/cache.hpp"
#include "guides/numerics/ops.hpp"
#include "test_support.hpp"

using namespace guides;
using namespace guides::cache;

namespace {

std::vector<env::Trajectory> expert_demos() {
  env::DemoOptions opts;
  opts.hard_fraction = 0.3;
  return env::generate_demonstrations(env::default_tasks(), 10, 5, {}, opts);
}

CacheStats run(const env::Trajectory& traj, double tau) {
  const ObsEmbedder emb;
  SimilarityCache<int> c(emb, tau);
  int calls = 0;
  for (const auto& s : traj.steps) c.get_or_query(s.obs, [&](const env::Observation&) { return ++calls; });
  EXPECT_EQ(static_cast<std::size_t>(calls), c.stats().queries);
  return c.stats();
}

}  // namespace

TEST(Embedder, UnitNormDeterministicAndZeroCase) {
  const ObsEmbedder emb;
  numerics::Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    env::Observation obs{std::vector<double>(env::kObsDim)};
    for (double& v : obs.features) v = rng.uniform(-2, 2);
    const auto e = emb.embed(obs);
    EXPECT_NEAR(numerics::l2_norm(e), 1.0, 1e-9);
    EXPECT_EQ(e, emb.embed(obs));
  }
  const auto z = emb.embed(env::Observation{std::vector<double>(env::kObsDim, 0.0)});
  EXPECT_EQ(z[0], 1.0);
  EXPECT_NEAR(numerics::l2_norm(z), 1.0, 1e-15);
  EXPECT_THROW(emb.embed(env::Observation{{1.0}}), std::invalid_argument);
}

TEST(CosineSim, DotProductOracle) {
  numerics::Rng rng(4);
  const std::vector<double> x = {1, 0, 0}, y = {0, 1, 0};
  EXPECT_EQ(cosine_sim(x, y), 0.0);
  EXPECT_EQ(cosine_sim(x, x), 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(16), b(16);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal();
    const double na = numerics::l2_norm(a), nb = numerics::l2_norm(b);
    for (double& v : a) v /= na;
    for (double& v : b) v /= nb;
    long double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += static_cast<long double>(a[i]) * b[i];
    EXPECT_NEAR(cosine_sim(a, b), static_cast<double>(d), 1e-12);
  }
  EXPECT_THROW(cosine_sim(x, std::vector<double>(2)), std::invalid_argument);
}

TEST(SimilarityCache, ColdStartReuseAndFailure) {
  const ObsEmbedder emb;
  SimilarityCache<int> c(emb, 0.95);
  const auto obs = env::observe(env::reset(env::default_tasks()[0], 1));
  EXPECT_THROW(c.get_or_query(obs, [](const env::Observation&) -> int { throw std::runtime_error("x"); }),
               std::runtime_error);
  EXPECT_EQ(c.stats().steps, 0u);
  EXPECT_THROW(c.overwrite(1), std::logic_error);
  EXPECT_TRUE(c.get_or_query(obs, [](const env::Observation&) { return 7; }).was_query);
  const auto again = c.get_or_query(obs, [](const env::Observation&) { return 8; });
  EXPECT_FALSE(again.was_query);
  EXPECT_EQ(again.output, 7);
  c.overwrite(9);
  EXPECT_EQ(c.get_or_query(obs, [](const env::Observation&) { return 8; }).output, 9);
  EXPECT_EQ(c.stats().queries + c.stats().hits, c.stats().steps);
}

TEST(SimilarityCache, AccountingThresholdsAndMonotonicity) {
  for (const auto& traj : expert_demos()) {
    const auto n = traj.steps.size();
    const auto all = run(traj, 1.0);
    EXPECT_EQ(all.queries, n);
    EXPECT_EQ(run(traj, 1.5).queries, n);
    EXPECT_EQ(run(traj, -1.0).queries, 1u);
    EXPECT_EQ(run(traj, -3.0).queries, 1u);
    std::size_t prev = 0;
    for (double tau = -1.0; tau <= 1.0; tau += 0.05) {
      const auto s = run(traj, tau);
      EXPECT_EQ(s.queries + s.hits, s.steps);
      EXPECT_GE(s.queries, prev);
      prev = s.queries;
    }
  }
}

TEST(SimilarityCache, ExpertTrajectoriesQueryAtMostAQuarter) {
  std::size_t steps = 0, queries = 0;
  for (const auto& traj : expert_demos()) {
    const auto s = run(traj, 0.95);
    steps += s.steps;
    queries += s.queries;
  }
  EXPECT_LE(4 * queries, steps);
}

TEST(SimilarityCache, PickupBreaksReuse) {
  const ObsEmbedder emb;
  for (const auto& traj : expert_demos()) {
    for (std::size_t t = 1; t < traj.steps.size(); ++t) {
      if (traj.steps[t - 1].action != env::Action::grip_close) continue;
      const double sim = cosine_sim(emb.embed(traj.steps[t - 1].obs), emb.embed(traj.steps[t].obs));
      EXPECT_LE(sim, 0.95);
    }
  }
}
