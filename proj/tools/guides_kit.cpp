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


// guides-kit: command-line driver for the training and evaluation pipeline.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "guides/env/demo_io.hpp"
#include "guides/harness/report.hpp"
#include "guides/numerics/checkpoint.hpp"

namespace fs = std::filesystem;
using namespace guides;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key = value config file (defaults when omitted)");
  sub->add_option("--set", c.overrides, "override one config key, as key=value")->take_all();
}

harness::RunConfig resolve(const Common& c) {
  harness::RunConfig cfg = c.config.empty() ? harness::RunConfig{} : harness::load_config(c.config);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    harness::set_field(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

policy::Policy load_policy(const std::string& p) { return policy::Policy::from_params(numerics::load_checkpoint(p)); }
aem::Aem load_aem(const std::string& p) { return aem::Aem::from_params(numerics::load_checkpoint(p)); }
instructor::InstructorModel load_instructor(const std::string& p) {
  return instructor::InstructorModel::from_params(numerics::load_checkpoint(p));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"guides-kit: guided imitation pipeline on a grid kitchen"};
  app.require_subcommand(1);

  Common c_gen;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-demos", "generate expert demonstrations (JSONL)");
  add_common(gen, c_gen);
  gen->add_option("--out", gen_out)->required();
  gen->callback([&] {
    const auto demos = harness::generate_demos(resolve(c_gen));
    env::write_demos_jsonl(demos, gen_out);
    std::printf("wrote %zu demonstrations to %s\n", demos.size(), gen_out.c_str());
  });

  Common c_pre;
  std::string pre_demos, pre_out;
  auto* pre = app.add_subcommand("pretrain", "behaviour-clone the policy");
  add_common(pre, c_pre);
  pre->add_option("--demos", pre_demos)->required();
  pre->add_option("--out", pre_out)->required();
  pre->callback([&] {
    const auto out = harness::pretrain(resolve(c_pre), env::read_demos_jsonl(pre_demos));
    numerics::save_checkpoint(out.policy.params(), pre_out);
    for (std::size_t e = 0; e < out.epoch_loss.size(); ++e) {
      std::printf("epoch %zu loss %.6f\n", e + 1, out.epoch_loss[e]);
    }
  });

  Common c_lab;
  std::string lab_demos, lab_out;
  bool lab_uninformative = false;
  auto* lab = app.add_subcommand("label", "derive instruction labels from motion deltas");
  add_common(lab, c_lab);
  lab->add_option("--demos", lab_demos)->required();
  lab->add_option("--out", lab_out)->required();
  lab->add_flag("--uninformative", lab_uninformative, "uniformly random verbs (ablation)");
  lab->callback([&] {
    const auto cfg = resolve(c_lab);
    const auto demos = env::read_demos_jsonl(lab_demos);
    const auto labels = lab_uninformative ? instructor::build_uninformative_dataset(demos, cfg.seed)
                                          : instructor::build_instruction_dataset(demos);
    instructor::write_labels_jsonl(labels, lab_out);
    std::printf("wrote %zu labels to %s\n", labels.size(), lab_out.c_str());
  });

  Common c_ft;
  std::string ft_policy, ft_demos, ft_out_policy, ft_out_aem;
  bool ft_no_task = false;
  auto* ft = app.add_subcommand("finetune", "guidance-aware fine-tuning of decoder and AEM");
  add_common(ft, c_ft);
  ft->add_option("--policy", ft_policy, "pretrained policy checkpoint")->required();
  ft->add_option("--demos", ft_demos)->required();
  ft->add_option("--out-policy", ft_out_policy)->required();
  ft->add_option("--out-aem", ft_out_aem)->required();
  ft->add_flag("--no-task-desc", ft_no_task, "replace AEM task tokens by padding");
  ft->callback([&] {
    const auto out = harness::finetune(resolve(c_ft), load_policy(ft_policy),
                                       env::read_demos_jsonl(ft_demos), ft_no_task);
    numerics::save_checkpoint(out.policy.params(), ft_out_policy);
    numerics::save_checkpoint(out.aem.params(), ft_out_aem);
    std::printf("E_eta raw %zu clamped %zu, ran %d epochs; loss %.6f -> %.6f\n", out.schedule.raw,
                out.schedule.clamped, out.epochs, out.result.initial_loss,
                out.result.epoch_loss.empty() ? out.result.initial_loss : out.result.epoch_loss.back());
  });

  Common c_ti;
  std::string ti_labels, ti_aem, ti_out;
  auto* ti = app.add_subcommand("train-instructor", "fine-tune the instructor on labels");
  add_common(ti, c_ti);
  ti->add_option("--labels", ti_labels)->required();
  ti->add_option("--aem", ti_aem, "AEM whose instruction table supplies hint contexts")->required();
  ti->add_option("--out", ti_out)->required();
  ti->callback([&] {
    const auto out = harness::train_instructor(resolve(c_ti), instructor::read_labels_jsonl(ti_labels),
                                               load_aem(ti_aem).instruction_table());
    numerics::save_checkpoint(out.model.params(), ti_out);
    std::printf("held-out accuracy %.4f over %zu examples\n", out.result.heldout_accuracy,
                out.result.heldout_examples);
  });

  Common c_ev;
  std::string ev_policy, ev_aem, ev_instr, ev_log, ev_out, ev_condition = "guided", ev_split = "ambiguous";
  auto* ev = app.add_subcommand("eval", "evaluate one condition over the configured seeds");
  add_common(ev, c_ev);
  ev->add_option("--condition", ev_condition)->check(CLI::IsMember({"unguided", "guided", "reflector"}));
  ev->add_option("--split", ev_split)->check(CLI::IsMember({"ambiguous", "hard"}));
  ev->add_option("--policy", ev_policy)->required();
  ev->add_option("--aem", ev_aem);
  ev->add_option("--instructor", ev_instr);
  ev->add_option("--log", ev_log, "execution log (JSONL), read and appended; reflector only");
  ev->add_option("--out", ev_out, "report CSV")->required();
  ev->callback([&] {
    const auto cfg = resolve(c_ev);
    const auto split = ev_split == "hard" ? harness::Split::hard : harness::Split::ambiguous;
    const auto pol = load_policy(ev_policy);
    std::optional<aem::Aem> a;
    std::optional<instructor::InstructorModel> ins;
    std::optional<reflector::ExecutionLog> log;
    harness::EvalComponents comp;
    comp.condition = ev_condition;
    comp.policy = &pol;
    if (ev_condition != "unguided") {
      if (ev_aem.empty() || ev_instr.empty()) throw std::invalid_argument("--aem and --instructor are required for guided conditions");
      a = load_aem(ev_aem);
      ins = load_instructor(ev_instr);
      comp.aem = &*a;
      comp.instructor = &*ins;
    }
    if (ev_condition == "reflector") {
      if (ev_log.empty()) throw std::invalid_argument("--log is required for the reflector condition");
      log = reflector::ExecutionLog::load(ev_log);
      comp.log = &*log;
      comp.context_table = &a->instruction_table();
    }
    const int n = split == harness::Split::hard ? cfg.reflector_trials : cfg.episodes_per_task;
    harness::SuccessReport report;
    for (auto seed : cfg.eval_seeds()) report.append(harness::run_eval(comp, cfg, split, seed, n));
    write_text(ev_out, harness::render_report(report, harness::ReportFormat::csv));
    std::printf("%s/%s success %.4f\n", ev_condition.c_str(), ev_split.c_str(),
                harness::pooled_rate(report, ev_condition));
  });

  Common c_ab;
  std::string ab_variant, ab_out;
  auto* ab = app.add_subcommand("ablate", "train everything from the config and run one ablation");
  add_common(ab, c_ab);
  ab->add_option("--variant", ab_variant, "defaults to the ablation flags set in the config")
      ->check(CLI::IsMember({"no_motion_ft", "no_task_desc", "random_g"}));
  ab->add_option("--out", ab_out, "report CSV")->required();
  ab->callback([&] {
    const auto cfg = resolve(c_ab);
    std::vector<harness::Variant> variants;
    if (!ab_variant.empty()) {
      variants.push_back(harness::parse_variant(ab_variant));
    } else {
      if (cfg.no_motion_ft) variants.push_back(harness::Variant::no_motion_ft);
      if (cfg.no_task_desc) variants.push_back(harness::Variant::no_task_desc);
      if (cfg.random_g) variants.push_back(harness::Variant::random_g);
    }
    if (variants.empty()) throw std::invalid_argument("no ablation selected: pass --variant or set a flag");
    const auto art = harness::train_all(cfg);
    harness::SuccessReport report;
    for (auto seed : cfg.eval_seeds()) {
      report.append(harness::run_eval(harness::standard_components(art, "unguided"), cfg,
                                      harness::Split::ambiguous, seed, cfg.episodes_per_task));
      for (auto v : variants) report.append(harness::run_ablation(v, art, cfg, seed));
    }
    write_text(ab_out, harness::render_report(report, harness::ReportFormat::csv));
    for (auto v : variants) {
      const std::string name(harness::variant_name(v));
      std::printf("%s success %.4f\n", name.c_str(), harness::pooled_rate(report, name));
    }
  });

  std::string ex_aem, ex_out;
  bool ex_no_task = false;
  auto* ex = app.add_subcommand("export-embeddings", "write guidance vectors per (task, instruction)");
  ex->add_option("--aem", ex_aem)->required();
  ex->add_option("--out", ex_out)->required();
  ex->add_flag("--no-task-desc", ex_no_task);
  ex->callback([&] { harness::export_embeddings(load_aem(ex_aem), env::default_tasks(), ex_out, ex_no_task); });

  std::string rep_in, rep_format = "markdown";
  auto* rep = app.add_subcommand("report", "render a report CSV");
  rep->add_option("--in", rep_in)->required();
  rep->add_option("--format", rep_format)->check(CLI::IsMember({"csv", "markdown"}));
  rep->callback([&] {
    std::cout << harness::render_report(harness::parse_report_csv(read_text(rep_in)),
                                        harness::parse_report_format(rep_format));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "guides-kit: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
