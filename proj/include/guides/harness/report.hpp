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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "guides/harness/eval.hpp"

namespace guides::harness {

enum class ReportFormat { csv, markdown };
ReportFormat parse_report_format(std::string_view name);

/// Column order shared by both formats.
const std::vector<std::string>& report_columns();

/// One line per row, rates and means to 4 decimals. delta_vs_unguided is the
/// row's rate minus the unguided rate for the same split, seed and task, blank
/// when there is no such row.
std::string render_report(const SuccessReport& report, ReportFormat format);
/// Inverse of render_report(csv) for the row fields; delta and rate are derived
/// and ignored.
SuccessReport parse_report_csv(std::string_view text);

/// One line per (task, instruction): task id, instruction name, then the
/// guidance vector.
std::string embeddings_csv(const aem::Aem& aem, std::span<const env::TaskSpec> tasks,
                           bool drop_task_description = false);
void export_embeddings(const aem::Aem& aem, std::span<const env::TaskSpec> tasks,
                       const std::filesystem::path& path, bool drop_task_description = false);

}  // namespace guides::harness
