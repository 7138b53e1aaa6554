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

#include "commstream/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "commstream/errors.hpp"

namespace commstream {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

nlohmann::json params_json(const RunConfig& c) {
  return {{"grace_period", c.tree.grace_period},
          {"split_confidence", c.tree.split_confidence},
          {"tie_threshold", c.tree.tie_threshold},
          {"drift_delta", c.tree.drift_delta},
          {"warmup", c.warmup}};
}

nlohmann::json confusion_json(const ConfusionMatrix& m) {
  return {{"success_correct", m.success_correct},
          {"success_incorrect", m.success_incorrect},
          {"fail_correct", m.fail_correct},
          {"fail_incorrect", m.fail_incorrect}};
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

}  // namespace

std::vector<FeatureRow> extract_rows(const std::filesystem::path& builds_path,
                                     const std::filesystem::path& items_path,
                                     std::vector<std::string>* warnings) {
  auto builds_in = open_input(builds_path);
  auto items_in = open_input(items_path);
  auto builds =
      read_builds_jsonl(builds_in, warnings, builds_path.filename().string());
  const auto items =
      read_work_items_jsonl(items_in, warnings, items_path.filename().string());
  builds = order_chronologically(std::move(builds));

  std::vector<FeatureRow> rows;
  rows.reserve(builds.size());
  for (const auto& b : builds) {
    rows.push_back({b.build_id, b.outcome, feature_vector(b, items)});
  }
  return rows;
}

RunOutcome run_experiment(std::span<const Instance> instances,
                          const RunConfig& config,
                          const std::filesystem::path& out_dir) {
  config.tree.validate();
  RunOutcome out;
  if (config.tree.grace_period >= instances.size()) {
    out.warnings.push_back(
        "grace period " + std::to_string(config.tree.grace_period) +
        " is not below the stream length " + std::to_string(instances.size()) +
        "; the model may underfit and lose final accuracy");
  }

  std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
  HoeffdingTree tree(config.tree, names);
  PrequentialOptions options;
  options.warmup = config.warmup;
  options.global_drift_delta = config.tree.drift_delta;

  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  // Drift snapshots need the tree right after the event, so the loop is
  // driven through a thin wrapper around the tree.
  struct SnapshotModel {
    HoeffdingTree& tree;
    const std::filesystem::path& dir;
    VoteReport predict(std::span<const double> f) const {
      return tree.predict(f);
    }
    std::vector<DriftEvent> train(const Instance& inst) {
      auto events = tree.train(inst);
      if (!events.empty() && !dir.empty()) {
        write_file(
            dir / ("tree_drift_" +
                   std::to_string(events.front().instance_index) + ".dot"),
            tree.to_dot());
      }
      return events;
    }
  } model{tree, out_dir};

  out.log = run_prequential(model, instances, options);
  out.final_tree = tree.render();

  const ConfusionMatrix& cm = out.log.confusion();
  nlohmann::json events = nlohmann::json::array();
  for (const auto& r : out.log.records()) {
    for (const auto& e : r.drift_events) {
      events.push_back({{"index", r.index},
                        {"path", e.path},
                        {"discarded_weight", e.discarded_weight}});
    }
  }
  out.summary = {{"instances", instances.size()},
                 {"scored", out.log.size()},
                 {"params", params_json(config)},
                 {"confusion", confusion_json(cm)},
                 {"accuracy", out.log.final_accuracy()},
                 {"recall_success", optional_json(cm.recall(Label::success))},
                 {"recall_fail", optional_json(cm.recall(Label::fail))},
                 {"drift_event_indices", out.log.drift_indices()},
                 {"drift_events", std::move(events)},
                 {"global_drift_indices", out.log.global_drift_indices()},
                 {"splits", tree.split_count()},
                 {"final_tree", out.final_tree},
                 {"warnings", out.warnings}};

  if (!out_dir.empty()) {
    std::ostringstream log_csv;
    write_log_csv(log_csv, out.log);
    write_file(out_dir / "prequential_log.csv", log_csv.str());
    write_file(out_dir / "summary.json", out.summary.dump(2) + "\n");
    write_file(out_dir / "tree_final.dot", tree.to_dot());
    write_file(out_dir / "tree_final.json", tree.to_json().dump(2) + "\n");
  }
  return out;
}

CompareOutcome compare_models(std::span<const Instance> instances,
                              const RunConfig& config, std::size_t k,
                              bool resubstitution) {
  if (instances.size() <= config.warmup) {
    throw ArgumentError("comparison needs more than " +
                        std::to_string(config.warmup) + " instances, got " +
                        std::to_string(instances.size()));
  }
  CompareOutcome out;
  out.tree = run_experiment(instances, config).log.confusion();
  out.knn = knn_prequential(instances, k, config.warmup, resubstitution);
  out.table = comparison_table(out.tree, out.knn);
  return out;
}

}  // namespace commstream
