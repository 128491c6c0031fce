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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guides/env/world.hpp"
#include "guides/instructor/model.hpp"
#include "guides/numerics/tensor.hpp"

namespace guides::reflector {

struct TextEmbedderConfig {
  std::size_t dim = 128;
  std::uint64_t seed = 0x7E47;
};

/// Signed feature hashing of lower-cased unigrams and bigrams, normalized.
/// Text without tokens maps to e_0.
class TextEmbedder {
 public:
  explicit TextEmbedder(const TextEmbedderConfig& cfg = {}) : cfg_(cfg) {}
  std::vector<double> embed(std::string_view text) const;
  std::size_t dim() const noexcept { return cfg_.dim; }

 private:
  TextEmbedderConfig cfg_;
};

std::vector<std::string> tokenize(std::string_view text);

struct LogEntry {
  std::uint64_t id = 0;
  int task_id = 0;
  int t = 0;
  std::string condition;
  std::vector<double> embedding;
  std::size_t instruction = 0;
  double conf = 0.0;
  bool operator==(const LogEntry&) const = default;
};

/// Append-only store of (condition, instruction) pairs. With a path, every
/// append is written through as one JSON line.
class ExecutionLog {
 public:
  explicit ExecutionLog(TextEmbedder embedder = TextEmbedder{},
                        std::optional<std::filesystem::path> path = std::nullopt);
  /// Reads an existing JSONL log and keeps appending to it.
  static ExecutionLog load(const std::filesystem::path& path, TextEmbedder embedder = TextEmbedder{});

  std::uint64_t record(std::string condition, std::size_t instruction, double conf, int task_id,
                       int t);
  /// Appends a fully formed entry; its id must exceed every existing id.
  void append(LogEntry entry);

  std::span<const LogEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const TextEmbedder& embedder() const noexcept { return embedder_; }

 private:
  void persist(const LogEntry& entry) const;

  TextEmbedder embedder_;
  std::optional<std::filesystem::path> path_;
  std::vector<LogEntry> entries_;
};

struct ReasonerQuery {
  std::string text;
  std::vector<double> embedding;
};

class Reasoner {
 public:
  virtual ~Reasoner() = default;
  virtual ReasonerQuery formulate(std::span<const std::string> trace, const env::TaskSpec& task,
                                  const TextEmbedder& embedder) const = 0;
};

/// Deterministic one-sentence query from the last trace line, the task verb and
/// the nearest-object relation.
class TemplateReasoner final : public Reasoner {
 public:
  ReasonerQuery formulate(std::span<const std::string> trace, const env::TaskSpec& task,
                          const TextEmbedder& embedder) const override;
};

struct ReflectorConfig {
  double tau = 0.6;
  std::size_t k = 2;
  int r_max = 2;
  void validate() const;
};

bool should_reflect(double conf, const ReflectorConfig& cfg);

ReasonerQuery formulate_query(const Reasoner& reasoner, std::span<const std::string> trace,
                              const env::TaskSpec& task, const TextEmbedder& embedder);

/// Top-k entries by cosine similarity, ties to the lower id.
std::vector<const LogEntry*> retrieve(const ExecutionLog& log, const ReasonerQuery& q,
                                      std::size_t k);

/// Mean of the instruction-table rows of the retrieved instructions.
std::vector<double> retrieval_context(std::span<const LogEntry* const> retrieved,
                                      const numerics::Tensor2& instruction_table);

instructor::InstructorOutput augment_and_reinfer(const instructor::InstructorModel& model,
                                                 const env::Observation& obs,
                                                 const env::TaskSpec& task,
                                                 std::span<const LogEntry* const> retrieved,
                                                 const numerics::Tensor2& instruction_table);

struct ReflectResult {
  instructor::InstructorOutput output;
  int rounds = 0;
};

ReflectResult reflect_loop(const instructor::InstructorModel& model, const env::Observation& obs,
                           const env::TaskSpec& task, const ExecutionLog& log,
                           const numerics::Tensor2& instruction_table, const ReflectorConfig& cfg,
                           const Reasoner& reasoner = TemplateReasoner{});

/// Buffers one episode's executed steps and writes them to the log on success.
class EpisodeRecorder {
 public:
  void add(std::string condition, std::size_t instruction, double conf, int task_id, int t);
  /// Returns the number of entries written.
  std::size_t flush(ExecutionLog& log, bool success);

 private:
  struct Pending {
    std::string condition;
    std::size_t instruction;
    double conf;
    int task_id;
    int t;
  };
  std::vector<Pending> pending_;
};

}  // namespace guides::reflector
