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


#include <algorithm>
#include <filesystem>

#include "guides/numerics/ops.hpp"
#include "guides/reflector/reflector.hpp"
#include "test_support.hpp"

using namespace guides;
using namespace guides::reflector;

namespace {

std::vector<double> unit(numerics::Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  for (double& x : v) x = rng.normal();
  const double n = numerics::l2_norm(v);
  for (double& x : v) x /= n;
  return v;
}

std::vector<std::uint64_t> brute_force(const ExecutionLog& log, const ReasonerQuery& q, std::size_t k) {
  std::vector<std::pair<double, std::uint64_t>> scored;
  for (const auto& e : log.entries()) {
    double s = 0;
    for (std::size_t i = 0; i < q.embedding.size(); ++i) s += q.embedding[i] * e.embedding[i];
    scored.push_back({-s, e.id});
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::uint64_t> ids;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) ids.push_back(scored[i].second);
  return ids;
}

}  // namespace

TEST(TextEmbedder, NormalizedAndDeterministic) {
  const TextEmbedder emb;
  const auto a = emb.embed("gripper open, empty; nearest red adjacent");
  EXPECT_NEAR(numerics::l2_norm(a), 1.0, 1e-12);
  EXPECT_EQ(a, emb.embed("Gripper OPEN, empty; nearest red adjacent"));
  EXPECT_NE(a, emb.embed("gripper closed, holding red"));
  const auto e = emb.embed(" ,;");
  EXPECT_EQ(e[0], 1.0);
  EXPECT_EQ(tokenize("Pick the Apple, now"), (std::vector<std::string>{"pick", "the", "apple", "now"}));
}

TEST(ExecutionLog, IdsIncreaseAndPersist) {
  const auto path = std::filesystem::temp_directory_path() / "guides_log_test.jsonl";
  std::filesystem::remove(path);
  {
    ExecutionLog log(TextEmbedder{}, path);
    EXPECT_EQ(log.record("gripper open", 3, 0.7, 1, 4), 1u);
    EXPECT_EQ(log.record("gripper closed", 5, 0.9, 1, 5), 2u);
    LogEntry stale = log.entries()[0];
    EXPECT_THROW(log.append(stale), std::invalid_argument);
    LogEntry narrow = log.entries()[1];
    narrow.id = 10;
    narrow.embedding.resize(3);
    EXPECT_THROW(log.append(narrow), std::invalid_argument);
  }
  ExecutionLog back = ExecutionLog::load(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.entries()[1].instruction, 5u);
  EXPECT_EQ(back.record("again", 1, 0.5, 2, 0), 3u);
  EXPECT_EQ(ExecutionLog::load(path).size(), 3u);
  std::filesystem::remove(path);
}

TEST(Retrieve, MatchesBruteForceWithTies) {
  numerics::Rng rng(23);
  const TextEmbedder emb({8, 1});
  for (int trial = 0; trial < 40; ++trial) {
    ExecutionLog log(emb);
    const std::size_t n = rng.below(300);
    std::vector<std::vector<double>> pool;
    for (int i = 0; i < 5; ++i) pool.push_back(unit(rng, 8));
    for (std::size_t i = 0; i < n; ++i) {
      LogEntry e;
      e.id = i + 1;
      e.embedding = rng.uniform() < 0.3 ? pool[rng.below(pool.size())] : unit(rng, 8);
      log.append(e);
    }
    const ReasonerQuery q{"q", rng.uniform() < 0.5 ? pool[0] : unit(rng, 8)};
    const std::size_t k = rng.below(33);
    std::vector<std::uint64_t> got;
    for (const auto* e : retrieve(log, q, k)) got.push_back(e->id);
    EXPECT_EQ(got, brute_force(log, q, k));
  }
}

TEST(RetrievalContext, MeanOfInstructionRows) {
  numerics::Tensor2 table(3, 2, std::vector<double>{1, 2, 3, 4, 5, 6});
  EXPECT_EQ(retrieval_context({}, table), (std::vector<double>{0, 0}));
  LogEntry a, b;
  a.instruction = 0;
  b.instruction = 2;
  const std::vector<const LogEntry*> hits = {&a, &b};
  EXPECT_EQ(retrieval_context(hits, table), (std::vector<double>{3, 4}));
}

TEST(ReflectLoop, EmptyLogAndZeroThresholdReduceToInstruct) {
  const auto model = instructor::InstructorModel::create({16, 4}, 3);
  const numerics::Tensor2 table(instructor::kInstructionCount, 4, 0.25);
  const ExecutionLog log;
  ReflectorConfig cfg;
  cfg.tau = 1.0;
  for (const auto& task : env::default_tasks()) {
    const auto obs = env::observe(env::reset(task, 8));
    const auto plain = instructor::instruct(model, obs, task);
    const auto r = reflect_loop(model, obs, task, log, table, cfg);
    EXPECT_EQ(r.output, plain);
    ReflectorConfig off = cfg;
    off.tau = 0.0;
    const auto none = reflect_loop(model, obs, task, log, table, off);
    EXPECT_EQ(none.rounds, 0);
    EXPECT_EQ(none.output, plain);
  }
}

TEST(ReflectLoop, RoundsBoundedAndBestKept) {
  const auto model = instructor::InstructorModel::create({16, 4}, 3);
  numerics::Rng rng(6);
  const auto table = guides::testing::random_tensor(instructor::kInstructionCount, 4, rng, 3.0);
  ExecutionLog log;
  for (int i = 0; i < 20; ++i) log.record("gripper open, empty, eef in floor", i % 12, 0.5, 0, i);
  ReflectorConfig cfg;
  cfg.tau = 1.0;
  cfg.r_max = 3;
  const auto& task = env::default_tasks()[0];
  const auto obs = env::observe(env::reset(task, 2));
  const auto r = reflect_loop(model, obs, task, log, table, cfg);
  EXPECT_EQ(r.rounds, 3);
  EXPECT_GE(r.output.confidence, instructor::instruct(model, obs, task).confidence);
  cfg.r_max = 0;
  EXPECT_THROW(reflect_loop(model, obs, task, log, table, cfg), std::invalid_argument);
}

TEST(EpisodeRecorder, WritesOnlyOnSuccess) {
  ExecutionLog log;
  EpisodeRecorder rec;
  rec.add("a", 1, 0.5, 0, 0);
  rec.add("b", 2, 0.6, 0, 1);
  EXPECT_EQ(rec.flush(log, false), 0u);
  EXPECT_TRUE(log.empty());
  rec.add("c", 3, 0.7, 0, 2);
  EXPECT_EQ(rec.flush(log, true), 1u);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.entries()[0].condition, "c");
}
