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

#include "guides/reflector/reflector.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "guides/numerics/ops.hpp"
#include "guides/numerics/random.hpp"

namespace guides::reflector {

using Json = nlohmann::ordered_json;

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json to_json(const LogEntry& e) {
  Json j;
  j["id"] = e.id;
  j["task_id"] = e.task_id;
  j["t"] = e.t;
  j["condition"] = e.condition;
  j["embedding"] = e.embedding;
  j["instruction"] = e.instruction;
  j["conf"] = e.conf;
  return j;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<double> TextEmbedder::embed(std::string_view text) const {
  if (cfg_.dim == 0) throw std::invalid_argument("TextEmbedder: dim must be positive");
  std::vector<double> v(cfg_.dim, 0.0);
  const auto tokens = tokenize(text);
  auto add = [&](const std::string& feature) {
    const std::uint64_t h = fnv1a(feature, cfg_.seed);
    v[(h >> 1) % cfg_.dim] += (h & 1) ? 1.0 : -1.0;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    add(tokens[i]);
    if (i + 1 < tokens.size()) add(tokens[i] + " " + tokens[i + 1]);
  }
  const double norm = numerics::l2_norm(v);
  if (norm == 0.0) {
    v.assign(cfg_.dim, 0.0);
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= norm;
  return v;
}

ExecutionLog::ExecutionLog(TextEmbedder embedder, std::optional<std::filesystem::path> path)
    : embedder_(embedder), path_(std::move(path)) {}

ExecutionLog ExecutionLog::load(const std::filesystem::path& path, TextEmbedder embedder) {
  ExecutionLog log(embedder, std::nullopt);
  std::ifstream in(path);
  if (in) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        const Json j = Json::parse(line);
        LogEntry e;
        e.id = j.at("id").get<std::uint64_t>();
        e.task_id = j.at("task_id").get<int>();
        e.t = j.at("t").get<int>();
        e.condition = j.at("condition").get<std::string>();
        e.embedding = j.at("embedding").get<std::vector<double>>();
        e.instruction = j.at("instruction").get<std::size_t>();
        e.conf = j.at("conf").get<double>();
        log.append(std::move(e));
      } catch (const std::exception& ex) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                 ": bad log entry (" + ex.what() + ")");
      }
    }
  }
  log.path_ = path;
  return log;
}

void ExecutionLog::persist(const LogEntry& entry) const {
  if (!path_) return;
  std::ofstream out(*path_, std::ios::app);
  out << to_json(entry).dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("ExecutionLog: cannot append to " + path_->string());
}

void ExecutionLog::append(LogEntry entry) {
  if (!entries_.empty() && entry.id <= entries_.back().id) {
    throw std::invalid_argument("ExecutionLog: entry ids must increase");
  }
  if (entry.embedding.size() != embedder_.dim()) {
    throw std::invalid_argument("ExecutionLog: embedding width mismatch");
  }
  persist(entry);
  entries_.push_back(std::move(entry));
}

std::uint64_t ExecutionLog::record(std::string condition, std::size_t instruction, double conf,
                                   int task_id, int t) {
  LogEntry e;
  e.id = entries_.empty() ? 1 : entries_.back().id + 1;
  e.task_id = task_id;
  e.t = t;
  e.embedding = embedder_.embed(condition);
  e.condition = std::move(condition);
  e.instruction = instruction;
  e.conf = conf;
  const std::uint64_t id = e.id;
  append(std::move(e));
  return id;
}

ReasonerQuery TemplateReasoner::formulate(std::span<const std::string> trace,
                                          const env::TaskSpec& task,
                                          const TextEmbedder& embedder) const {
  if (trace.empty()) throw std::invalid_argument("formulate_query: empty trace");
  std::string last = trace.back();
  std::replace(last.begin(), last.end(), '\n', ' ');
  std::string rel = "none";
  if (const auto pos = last.find("nearest "); pos != std::string::npos) {
    rel = last.substr(pos + 8);
  }
  ReasonerQuery q;
  q.text = "which step completes pick " + std::string(env::kind_name(task.kind)) + " given " +
           last + ", nearest " + rel + "?";
  q.embedding = embedder.embed(q.text);
  return q;
}

void ReflectorConfig::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("reflector tau outside [0, 1]");
  if (r_max < 1) throw std::invalid_argument("reflector r_max must be >= 1");
}

bool should_reflect(double conf, const ReflectorConfig& cfg) { return conf < cfg.tau; }

ReasonerQuery formulate_query(const Reasoner& reasoner, std::span<const std::string> trace,
                              const env::TaskSpec& task, const TextEmbedder& embedder) {
  if (trace.empty()) throw std::invalid_argument("formulate_query: empty trace");
  return reasoner.formulate(trace, task, embedder);
}

std::vector<const LogEntry*> retrieve(const ExecutionLog& log, const ReasonerQuery& q,
                                      std::size_t k) {
  if (k == 0 || log.empty()) return {};
  std::vector<std::pair<double, const LogEntry*>> scored;
  scored.reserve(log.size());
  for (const LogEntry& e : log.entries()) scored.emplace_back(numerics::dot(e.embedding, q.embedding), &e);
  const std::size_t n = std::min(k, scored.size());
  auto better = [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second->id < b.second->id;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    better);
  std::vector<const LogEntry*> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(scored[i].second);
  return out;
}

std::vector<double> retrieval_context(std::span<const LogEntry* const> retrieved,
                                      const numerics::Tensor2& instruction_table) {
  std::vector<double> ctx(instruction_table.cols(), 0.0);
  if (retrieved.empty()) return ctx;
  for (const LogEntry* e : retrieved) {
    if (e->instruction >= instruction_table.rows()) {
      throw std::invalid_argument("retrieval_context: instruction out of range");
    }
    const auto row = instruction_table.row(e->instruction);
    for (std::size_t c = 0; c < ctx.size(); ++c) ctx[c] += row[c];
  }
  for (double& v : ctx) v /= static_cast<double>(retrieved.size());
  return ctx;
}

instructor::InstructorOutput augment_and_reinfer(const instructor::InstructorModel& model,
                                                 const env::Observation& obs,
                                                 const env::TaskSpec& task,
                                                 std::span<const LogEntry* const> retrieved,
                                                 const numerics::Tensor2& instruction_table) {
  const auto ctx = retrieval_context(retrieved, instruction_table);
  return instructor::instruct(model, obs, task, std::span<const double>(ctx));
}

ReflectResult reflect_loop(const instructor::InstructorModel& model, const env::Observation& obs,
                           const env::TaskSpec& task, const ExecutionLog& log,
                           const numerics::Tensor2& instruction_table, const ReflectorConfig& cfg,
                           const Reasoner& reasoner) {
  cfg.validate();
  ReflectResult result{instructor::instruct(model, obs, task), 0};
  instructor::InstructorOutput current = result.output;
  while (should_reflect(current.confidence, cfg) && result.rounds < cfg.r_max) {
    const auto q = formulate_query(reasoner, current.trace, task, log.embedder());
    const auto hits = retrieve(log, q, cfg.k);
    current = augment_and_reinfer(model, obs, task, hits, instruction_table);
    ++result.rounds;
    if (current.confidence > result.output.confidence) result.output = current;
  }
  return result;
}

void EpisodeRecorder::add(std::string condition, std::size_t instruction, double conf, int task_id,
                          int t) {
  pending_.push_back({std::move(condition), instruction, conf, task_id, t});
}

std::size_t EpisodeRecorder::flush(ExecutionLog& log, bool success) {
  std::size_t written = 0;
  if (success) {
    for (auto& p : pending_) {
      log.record(std::move(p.condition), p.instruction, p.conf, p.task_id, p.t);
      ++written;
    }
  }
  pending_.clear();
  return written;
}

}  // namespace guides::reflector
