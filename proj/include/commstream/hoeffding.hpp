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

// Incremental Hoeffding-tree classifier for two classes over numeric
// attributes, with per-node drift detectors that replace outdated subtrees.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "commstream/adwin.hpp"
#include "commstream/commgraph.hpp"
#include "commstream/label.hpp"

namespace commstream {

struct TreeParams {
  std::size_t grace_period = 20;
  double split_confidence = 0.05;
  double tie_threshold = 0.1;
  // Range of the split criterion; log2(#classes) = 1 for information gain
  // over two classes.
  double range = 1.0;
  double drift_delta = AdwinDetector::kDefaultDelta;
  // When false no node carries a drift detector.
  bool drift_detection = true;

  /// Throws ArgumentError when a field is outside its domain.
  void validate() const;
};

struct Instance {
  std::vector<double> features;
  Label label = Label::success;
  std::string id;
};

Instance make_instance(const FeatureVector& features, Label label,
                       std::string id = {});

struct VoteReport {
  Label predicted = Label::success;
  double votes_fail = 0.0;
  double votes_success = 0.0;
};

/// Majority vote; equal votes go to success.
Label majority(double votes_fail, double votes_success);

/// sqrt(R^2 ln(1/delta) / (2n)). Throws ArgumentError outside R > 0,
/// delta in (0, 1], n >= 1.
double hoeffding_bound(double range, double delta, std::uint64_t n);

/// Split iff best_gain > 0 and (best_gain - second_gain > epsilon or
/// epsilon < tie_threshold).
bool split_rule(double best_gain, double second_gain, double epsilon,
                double tie_threshold);

/// Running count, mean and squared-deviation sum (Welford).
struct GaussianSummary {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  double variance() const;
  /// Estimated fraction of the mass at or below x.
  double fraction_at_or_below(double x) const;
};

struct AttributeStats {
  std::array<GaussianSummary, 2> per_class;  // indexed by Label
  double min = 0.0;
  double max = 0.0;
  bool seen = false;
};

struct LeafStats {
  // Vote weights, indexed by Label. Includes weight inherited from the parent
  // at split time.
  std::array<double, 2> class_counts{0.0, 0.0};
  std::vector<AttributeStats> attributes;
  std::uint64_t observed = 0;  // instances routed here since the leaf was made
  std::uint64_t instances_since_eval = 0;

  explicit LeafStats(std::size_t attribute_count = 0)
      : attributes(attribute_count) {}
  void add(std::span<const double> features, Label label);
  double weight() const { return class_counts[0] + class_counts[1]; }
};

struct SplitDecision {
  bool should_split = false;
  std::size_t attribute = 0;
  double threshold = 0.0;
  double best_gain = 0.0;
  double second_gain = 0.0;
  double epsilon = 0.0;
};

/// Candidate thresholds for an attribute: midpoints of ten equal bins
/// spanning the observed [min, max]. Empty when min == max.
std::vector<double> candidate_thresholds(const AttributeStats& stats);

/// Information gain of splitting at `threshold`, class mass on each side
/// estimated from the per-class Gaussian summaries.
double split_gain(const AttributeStats& stats, double threshold);

/// Evaluates the leaf's best split against the Hoeffding bound.
SplitDecision evaluate_split(const LeafStats& leaf, const TreeParams& params);

struct DriftEvent {
  std::uint64_t instance_index = 0;  // 0-based count of train() calls
  std::string path;                  // "root", "root.L", "root.L.R", ...
  double discarded_weight = 0.0;
};

struct SplitEvent {
  std::uint64_t instance_index = 0;
  std::string path;
  std::size_t attribute = 0;
  double threshold = 0.0;
  double best_gain = 0.0;
};

class HoeffdingTree {
 public:
  explicit HoeffdingTree(TreeParams params = {},
                         std::vector<std::string> attribute_names = {});
  ~HoeffdingTree();
  HoeffdingTree(HoeffdingTree&&) noexcept;
  HoeffdingTree& operator=(HoeffdingTree&&) noexcept;
  HoeffdingTree(const HoeffdingTree&) = delete;
  HoeffdingTree& operator=(const HoeffdingTree&) = delete;

  /// Tree with one split whose leaves hold the given (fail, success) votes.
  static HoeffdingTree make_stump(TreeParams params,
                                  std::vector<std::string> attribute_names,
                                  std::size_t attribute, double threshold,
                                  std::array<double, 2> left_votes,
                                  std::array<double, 2> right_votes);

  VoteReport predict(std::span<const double> features) const;

  /// Test-then-learn step for one labelled instance. Returns the subtrees
  /// that were replaced by fresh leaves because their detector fired.
  std::vector<DriftEvent> train(const Instance& instance);

  /// Indented text: "<attribute> <= <threshold>" per split (left child
  /// first), "leaf: <fail votes> | <success votes>" per leaf.
  std::string render() const;
  std::string to_dot() const;

  nlohmann::json to_json() const;
  static HoeffdingTree from_json(const nlohmann::json& j);

  const TreeParams& params() const { return params_; }
  const std::vector<std::string>& attribute_names() const { return names_; }
  std::size_t attribute_count() const { return names_.size(); }

  std::uint64_t trained_count() const { return trained_; }
  double discarded_weight() const { return discarded_; }
  double total_leaf_weight() const;
  std::size_t leaf_count() const;
  std::size_t split_count() const;
  std::size_t depth() const;
  std::uint64_t split_evaluations() const { return split_evaluations_; }
  const std::vector<SplitEvent>& split_history() const { return splits_; }

 private:
  struct Node;
  struct SplitNode {
    std::size_t attribute = 0;
    double threshold = 0.0;
    std::unique_ptr<Node> left;
    std::unique_ptr<Node> right;
    std::optional<AdwinDetector> detector;
  };
  struct Node {
    std::variant<LeafStats, SplitNode> content;
  };

  std::unique_ptr<Node> fresh_leaf() const;
  void check_features(std::span<const double> features) const;
  const LeafStats& route(std::span<const double> features) const;
  void split_leaf(Node& node, const SplitDecision& decision);

  static nlohmann::json node_to_json(const Node& node);
  std::unique_ptr<Node> node_from_json(const nlohmann::json& j) const;

  TreeParams params_;
  std::vector<std::string> names_;
  std::unique_ptr<Node> root_;
  std::uint64_t trained_ = 0;
  double discarded_ = 0.0;
  std::uint64_t split_evaluations_ = 0;
  std::vector<SplitEvent> splits_;
};

}  // namespace commstream
