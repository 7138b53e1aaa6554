// Copyright 2026, The commstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// On-disk formats: JSONL build and work-item records, the 17-column feature
// CSV and the prequential log CSV.

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commstream/commgraph.hpp"
#include "commstream/hoeffding.hpp"
#include "commstream/stream.hpp"

namespace commstream {

/// Parses "YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)" into UTC seconds;
/// fractional seconds are truncated. The date and time may also be separated
/// by a lowercase t or a space. Throws SchemaError.
std::chrono::sys_seconds parse_rfc3339(std::string_view text);
std::string format_rfc3339(std::chrono::sys_seconds t);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

/// Reads one BuildRecord per non-blank line. Unknown fields are reported in
/// `warnings`. SchemaError messages carry the 1-based line number.
std::vector<BuildRecord> read_builds_jsonl(std::istream& in,
                                           std::vector<std::string>* warnings,
                                           std::string_view source = "builds");
std::vector<WorkItemRecord> read_work_items_jsonl(
    std::istream& in, std::vector<std::string>* warnings,
    std::string_view source = "work items");

void write_builds_jsonl(std::ostream& out, std::span<const BuildRecord> builds);
void write_work_items_jsonl(std::ostream& out,
                            std::span<const WorkItemRecord> items);

struct FeatureRow {
  std::string build_id;
  Label outcome = Label::success;
  FeatureVector features;
};

/// build_id, outcome, then the fifteen features in kFeatureNames order.
std::string features_csv_header();
void write_features_csv(std::ostream& out, std::span<const FeatureRow> rows);
std::vector<FeatureRow> read_features_csv(std::istream& in,
                                          std::string_view source = "features");

std::vector<Instance> to_instances(std::span<const FeatureRow> rows);

/// index, predicted, actual, cum_accuracy, cum_recall_success,
/// cum_recall_fail, drift_flag. Absent recalls are empty cells.
void write_log_csv(std::ostream& out, const PrequentialLog& log);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace commstream
