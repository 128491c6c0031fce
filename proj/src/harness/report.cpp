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


#include "guides/harness/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "guides/instructor/vocab.hpp"

namespace guides::harness {
namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("embeddings_csv: number formatting failed");
  return std::string(buf, end);
}

using Key = std::tuple<std::string, std::uint64_t, int>;

std::vector<std::vector<std::string>> cells(const SuccessReport& report) {
  std::map<Key, double> baseline;
  for (const auto& r : report.rows) {
    if (r.condition == "unguided") baseline[{r.split, r.seed, r.task_id}] = r.rate();
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& r : report.rows) {
    std::string delta;
    auto it = baseline.find({r.split, r.seed, r.task_id});
    if (it != baseline.end() && r.condition != "unguided") delta = fixed4(r.rate() - it->second);
    out.push_back({r.condition, r.split, std::to_string(r.seed), std::to_string(r.task_id),
                   std::to_string(r.episodes), std::to_string(r.successes), fixed4(r.rate()),
                   fixed4(r.mean_steps), std::to_string(r.steps), std::to_string(r.queries),
                   std::to_string(r.hits), std::to_string(r.reflect_triggers),
                   std::to_string(r.reflect_rounds), delta});
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw std::invalid_argument(std::string("parse_report_csv: bad ") + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "condition", "split",   "seed",    "task_id", "episodes",         "successes",
      "rate",      "mean_steps", "steps", "queries", "hits", "reflect_triggers",
      "reflect_rounds", "delta_vs_unguided"};
  return cols;
}

std::string render_report(const SuccessReport& report, ReportFormat format) {
  const auto& cols = report_columns();
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& v) {
    if (format == ReportFormat::markdown) out << "| ";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out << (format == ReportFormat::csv ? "," : " | ");
      out << v[i];
    }
    out << (format == ReportFormat::markdown ? " |\n" : "\n");
  };
  line(cols);
  if (format == ReportFormat::markdown) line(std::vector<std::string>(cols.size(), "---"));
  for (const auto& row : cells(report)) line(row);
  return out.str();
}

SuccessReport parse_report_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != report_columns()) {
    throw std::invalid_argument("parse_report_csv: missing or unexpected header");
  }
  SuccessReport report;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != report_columns().size()) {
      throw std::invalid_argument("parse_report_csv: line " + std::to_string(lineno) + " has " +
                                  std::to_string(f.size()) + " fields");
    }
    ReportRow r;
    r.condition = f[0];
    r.split = f[1];
    r.seed = parse_number<std::uint64_t>(f[2], "seed");
    r.task_id = parse_number<int>(f[3], "task_id");
    r.episodes = parse_number<int>(f[4], "episodes");
    r.successes = parse_number<int>(f[5], "successes");
    r.mean_steps = parse_number<double>(f[7], "mean_steps");
    r.steps = parse_number<std::size_t>(f[8], "steps");
    r.queries = parse_number<std::size_t>(f[9], "queries");
    r.hits = parse_number<std::size_t>(f[10], "hits");
    r.reflect_triggers = parse_number<std::size_t>(f[11], "reflect_triggers");
    r.reflect_rounds = parse_number<std::size_t>(f[12], "reflect_rounds");
    report.rows.push_back(std::move(r));
  }
  return report;
}

std::string embeddings_csv(const aem::Aem& aem, std::span<const env::TaskSpec> tasks,
                           bool drop_task_description) {
  std::ostringstream out;
  out << "task_id,instruction";
  for (std::size_t j = 0; j < aem.dim(); ++j) out << ",g" << j;
  out << '\n';
  for (const auto& task : tasks) {
    const auto tokens = aem::aem_tokens(task, drop_task_description);
    for (std::size_t i = 0; i < instructor::kInstructionCount; ++i) {
      const auto g = aem.guidance_embedding({tokens, i});
      out << task.id << ',' << instructor::instruction_name(i);
      for (double v : g) out << ',' << shortest(v);
      out << '\n';
    }
  }
  return out.str();
}

void export_embeddings(const aem::Aem& aem, std::span<const env::TaskSpec> tasks,
                       const std::filesystem::path& path, bool drop_task_description) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("export_embeddings: cannot open " + path.string());
  f << embeddings_csv(aem, tasks, drop_task_description);
  if (!f) throw std::runtime_error("export_embeddings: write failed for " + path.string());
}

}  // namespace guides::harness
