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

#include "guides/harness/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace guides::harness {
namespace {

static_assert(std::is_same_v<std::size_t, std::uint64_t>, "seed fields share the size_t slot");
using FieldPtr =
    std::variant<int RunConfig::*, std::size_t RunConfig::*, double RunConfig::*, bool RunConfig::*>;

struct Field {
  const char* key;
  FieldPtr ptr;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      {"grid_width", &RunConfig::grid_width},
      {"grid_height", &RunConfig::grid_height},
      {"horizon", &RunConfig::horizon},
      {"latent_dim", &RunConfig::latent_dim},
      {"encoder_hidden", &RunConfig::encoder_hidden},
      {"decoder_hidden", &RunConfig::decoder_hidden},
      {"instructor_hidden", &RunConfig::instructor_hidden},
      {"instruction_vocab", &RunConfig::instruction_vocab},
      {"word_vocab", &RunConfig::word_vocab},
      {"seed", &RunConfig::seed},
      {"demos_per_task", &RunConfig::demos_per_task},
      {"demo_hard_fraction", &RunConfig::demo_hard_fraction},
      {"pretrain_epochs", &RunConfig::pretrain_epochs},
      {"pretrain_lr", &RunConfig::pretrain_lr},
      {"pretrain_batch", &RunConfig::pretrain_batch},
      {"aem_init_scale", &RunConfig::aem_init_scale},
      {"finetune_epochs", &RunConfig::finetune_epochs},
      {"finetune_lr", &RunConfig::finetune_lr},
      {"finetune_batch", &RunConfig::finetune_batch},
      {"instructor_epochs", &RunConfig::instructor_epochs},
      {"instructor_lr", &RunConfig::instructor_lr},
      {"hint_probability", &RunConfig::hint_probability},
      {"tau", &RunConfig::tau},
      {"tau_sim", &RunConfig::tau_sim},
      {"top_k", &RunConfig::top_k},
      {"r_max", &RunConfig::r_max},
      {"eval_seed", &RunConfig::eval_seed},
      {"eval_seed_count", &RunConfig::eval_seed_count},
      {"episodes_per_task", &RunConfig::episodes_per_task},
      {"reflector_trials", &RunConfig::reflector_trials},
      {"no_motion_ft", &RunConfig::no_motion_ft},
      {"no_task_desc", &RunConfig::no_task_desc},
      {"random_g", &RunConfig::random_g},
  };
  return table;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw std::invalid_argument("config: bad value '" + text + "' for " + key);
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

std::vector<std::uint64_t> RunConfig::eval_seeds() const {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < eval_seed_count; ++i) out.push_back(eval_seed + static_cast<std::uint64_t>(i));
  return out;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (grid_width < 3 || grid_height < 3) fail("grid must be at least 3x3");
  if (horizon < 1) fail("horizon must be >= 1");
  if (latent_dim == 0 || encoder_hidden == 0 || decoder_hidden == 0 || instructor_hidden == 0) {
    fail("layer widths must be positive");
  }
  if (instruction_vocab != instructor::kInstructionCount) fail("instruction_vocab is fixed at 12");
  if (word_vocab != env::kWordCount) fail("word_vocab is fixed at 15");
  if (demos_per_task < 1) fail("demos_per_task must be >= 1");
  if (demo_hard_fraction < 0.0 || demo_hard_fraction > 1.0) fail("demo_hard_fraction outside [0, 1]");
  if (pretrain_epochs < 1) fail("pretrain_epochs must be >= 1");
  if (finetune_epochs < 0) fail("finetune_epochs must be >= 0");
  if (instructor_epochs < 1) fail("instructor_epochs must be >= 1");
  if (!(pretrain_lr > 0 && finetune_lr > 0 && instructor_lr > 0)) fail("learning rates must be positive");
  if (pretrain_batch == 0 || finetune_batch == 0) fail("batch sizes must be positive");
  if (!(aem_init_scale > 0.0)) fail("aem_init_scale must be positive");
  if (hint_probability < 0.0 || hint_probability > 1.0) fail("hint_probability outside [0, 1]");
  reflector().validate();
  if (eval_seed_count < 1 || episodes_per_task < 1 || reflector_trials < 1) {
    fail("evaluation counts must be >= 1");
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.emplace_back(f.key);
  return out;
}

std::string to_text(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& f : fields()) {
    out << f.key << " = ";
    std::visit(
        [&](auto ptr) {
          using T = std::remove_cvref_t<decltype(cfg.*ptr)>;
          if constexpr (std::is_same_v<T, bool>) {
            out << (cfg.*ptr ? "true" : "false");
          } else if constexpr (std::is_same_v<T, double>) {
            out << format_double(cfg.*ptr);
          } else {
            out << cfg.*ptr;
          }
        },
        f.ptr);
    out << '\n';
  }
  return out.str();
}

void set_field(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key != f.key) continue;
    std::visit(
        [&](auto ptr) {
          using T = std::remove_cvref_t<decltype(cfg.*ptr)>;
          if constexpr (std::is_same_v<T, bool>) {
            if (value == "true" || value == "1") {
              cfg.*ptr = true;
            } else if (value == "false" || value == "0") {
              cfg.*ptr = false;
            } else {
              throw std::invalid_argument("config: bad boolean '" + value + "' for " + key);
            }
          } else {
            cfg.*ptr = parse_number<T>(key, value);
          }
        },
        f.ptr);
    return;
  }
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    set_field(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  out << to_text(cfg);
  if (!out) throw std::runtime_error("cannot write config " + path.string());
}

}  // namespace guides::harness
