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

// End-to-end commands: feature extraction, prequential runs and the
// Hoeffding tree versus k-NN comparison.

#include <cstddef>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commstream/hoeffding.hpp"
#include "commstream/io.hpp"
#include "commstream/knn.hpp"
#include "commstream/stream.hpp"

namespace commstream {

/// Reads both JSONL files, orders builds chronologically and computes one
/// feature row per build. Warnings from parsing are appended to `warnings`.
std::vector<FeatureRow> extract_rows(const std::filesystem::path& builds_path,
                                     const std::filesystem::path& items_path,
                                     std::vector<std::string>* warnings);

struct RunConfig {
  TreeParams tree;
  std::size_t warmup = kDefaultWarmup;
};

struct RunOutcome {
  PrequentialLog log;
  nlohmann::json summary;
  std::vector<std::string> warnings;
  std::string final_tree;
};

/// Prequential Hoeffding-tree run. When `out_dir` is non-empty it receives
/// prequential_log.csv, summary.json, tree_final.{dot,json} and one
/// tree_drift_<index>.dot per instance at which a subtree was replaced.
RunOutcome run_experiment(std::span<const Instance> instances,
                          const RunConfig& config,
                          const std::filesystem::path& out_dir = {});

struct CompareOutcome {
  ConfusionMatrix tree;
  ConfusionMatrix knn;
  std::string table;
};

/// Both models scored on the instances after the warmup: the tree trains on
/// the warmup first, k-NN ignores it.
CompareOutcome compare_models(std::span<const Instance> instances,
                              const RunConfig& config,
                              std::size_t k = KnnModel::kDefaultK,
                              bool resubstitution = false);

}  // namespace commstream
