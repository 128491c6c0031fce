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


#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "guides/harness/report.hpp"

using namespace guides;
using namespace guides::harness;

namespace {

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.encoder_hidden = 48;
  cfg.demos_per_task = 12;
  cfg.pretrain_epochs = 3;
  cfg.instructor_epochs = 4;
  cfg.episodes_per_task = 2;
  cfg.reflector_trials = 2;
  cfg.eval_seed_count = 1;
  return cfg;
}

const Artifacts& tiny_artifacts() {
  static const Artifacts a = train_all(tiny_config());
  return a;
}

bool same_params(const numerics::ParamStore& a, const numerics::ParamStore& b) {
  if (a.names() != b.names()) return false;
  for (const auto& n : a.names()) {
    const auto x = a.value(n).values();
    const auto y = b.value(n).values();
    if (x.size() != y.size() || !std::equal(x.begin(), x.end(), y.begin())) return false;
  }
  return true;
}

ReportRow row(std::string cond, int episodes, int successes, int task = 0) {
  ReportRow r;
  r.condition = std::move(cond);
  r.split = "ambiguous";
  r.seed = 1000;
  r.task_id = task;
  r.episodes = episodes;
  r.successes = successes;
  r.mean_steps = 12.5;
  r.steps = 40;
  r.queries = 9;
  r.hits = 31;
  return r;
}

}  // namespace

TEST(Config, TextRoundTripAndErrors) {
  RunConfig cfg;
  cfg.finetune_lr = 0.1 + 0.2;
  cfg.random_g = true;
  cfg.seed = 1234567890123ULL;
  EXPECT_EQ(parse_config(to_text(cfg)), cfg);
  const RunConfig c2 = parse_config("# comment\n tau = 0.5\n\ntop_k=3\n");
  EXPECT_EQ(c2.tau, 0.5);
  EXPECT_EQ(c2.top_k, 3u);
  EXPECT_THROW(parse_config("nope = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("tau 0.5\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("tau = x\n"), std::invalid_argument);
  RunConfig bad;
  bad.tau = 1.5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  const auto text = to_text(RunConfig{});
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), config_keys().size());
  EXPECT_EQ(RunConfig{}.eval_seeds().size(), 5u);
}

TEST(Report, FormattingRules) {
  SuccessReport empty;
  const auto csv = render_report(empty, ReportFormat::csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  const auto md = render_report(empty, ReportFormat::markdown);
  EXPECT_EQ(std::count(md.begin(), md.end(), '\n'), 2);

  SuccessReport r;
  r.rows = {row("unguided", 3, 1), row("guided", 3, 3)};
  const auto text = render_report(r, ReportFormat::csv);
  EXPECT_NE(text.find(",0.3333,"), std::string::npos);
  EXPECT_NE(text.find(",0.6667\n"), std::string::npos);  // 1.0000 - 0.3333
  EXPECT_EQ(parse_report_csv(text), r);
}

TEST(Report, MarkdownAndCsvCarrySameNumbers) {
  SuccessReport r;
  r.rows = {row("unguided", 7, 2, 1), row("reflector", 7, 5, 1), row("guided", 9, 4, 2)};
  auto numbers = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
      if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') {
        cur += ch;
      } else {
        if (!cur.empty() && cur != "-" && cur != "---") out.push_back(cur);
        cur.clear();
      }
    }
    return out;
  };
  EXPECT_EQ(numbers(render_report(r, ReportFormat::csv)), numbers(render_report(r, ReportFormat::markdown)));
  EXPECT_THROW(parse_report_format("html"), std::invalid_argument);
  EXPECT_THROW(parse_report_csv("a,b\n"), std::invalid_argument);
}

TEST(EpisodeSeed, DistinctAcrossSplitsAndEpisodes) {
  std::set<std::uint64_t> seen;
  const auto& task = env::default_tasks()[0];
  for (auto split : {Split::ambiguous, Split::hard}) {
    for (int ep = 0; ep < 50; ++ep) seen.insert(episode_seed(1000, split, task, ep));
  }
  EXPECT_EQ(seen.size(), 100u);
  EXPECT_EQ(episode_seed(1000, Split::hard, env::default_tasks()[0], 3),
            episode_seed(1000, Split::hard, env::default_tasks()[1], 3));
}

TEST(Pipeline, EvaluationAccounting) {
  const auto& a = tiny_artifacts();
  const auto cfg = tiny_config();
  for (const char* cond : {"unguided", "guided"}) {
    const auto rep = run_eval(standard_components(a, cond), cfg, Split::ambiguous, 1000, 2);
    ASSERT_EQ(rep.rows.size(), env::default_tasks().size());
    for (const auto& r : rep.rows) {
      EXPECT_LE(r.successes, r.episodes);
      EXPECT_EQ(r.queries + r.hits, r.steps);
      if (std::string(cond) == "unguided") EXPECT_EQ(r.steps, 0u);
    }
  }
  EXPECT_THROW(standard_components(a, "reflector"), std::invalid_argument);
  EXPECT_THROW(standard_components(a, "other"), std::invalid_argument);
  EvalComponents bad = standard_components(a, "guided");
  bad.instructor = nullptr;
  EXPECT_THROW(run_eval(bad, cfg, Split::ambiguous, 1000, 1), std::invalid_argument);
}

TEST(Pipeline, ZeroThresholdReflectorReproducesGuided) {
  const auto& a = tiny_artifacts();
  auto cfg = tiny_config();
  cfg.tau = 0.0;
  const auto g = run_eval(standard_components(a, "guided"), cfg, Split::hard, 1000, 2);
  reflector::ExecutionLog log;
  auto r = run_eval(standard_components(a, "reflector", &log), cfg, Split::hard, 1000, 2);
  for (auto& row : r.rows) {
    EXPECT_EQ(row.reflect_rounds, 0u);
    row.condition = "guided";
  }
  EXPECT_EQ(r, g);
}

TEST(Pipeline, DeterministicArtifactsAndExport) {
  const auto& a = tiny_artifacts();
  const Artifacts b = train_all(tiny_config());
  EXPECT_TRUE(same_params(a.pretrained.params(), b.pretrained.params()));
  EXPECT_TRUE(same_params(a.full.policy.params(), b.full.policy.params()));
  EXPECT_TRUE(same_params(a.full.aem.params(), b.full.aem.params()));
  EXPECT_TRUE(same_params(a.instructor.model.params(), b.instructor.model.params()));
  const auto csv = embeddings_csv(a.full.aem, env::default_tasks());
  EXPECT_EQ(csv, embeddings_csv(b.full.aem, env::default_tasks()));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'),
            static_cast<long>(1 + env::default_tasks().size() * instructor::kInstructionCount));
  const auto path = std::filesystem::temp_directory_path() / "guides_embed_test.csv";
  export_embeddings(a.full.aem, env::default_tasks(), path);
  EXPECT_EQ(std::filesystem::file_size(path), csv.size());
  std::filesystem::remove(path);
}
