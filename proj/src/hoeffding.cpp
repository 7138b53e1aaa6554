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

#include "commstream/hoeffding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "commstream/errors.hpp"

namespace commstream {

namespace {

constexpr std::size_t kCandidatesPerAttribute = 10;
constexpr int kTreeFormatVersion = 1;
constexpr std::string_view kTreeFormatName = "commstream-hoeffding-tree";

std::size_t idx(Label l) { return static_cast<std::size_t>(l); }

double entropy(double a, double b) {
  const double total = a + b;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : {a, b}) {
    if (c <= 0.0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<std::string> default_names(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) names.emplace_back(kFeatureNames[i]);
  return names;
}

}  // namespace

void TreeParams::validate() const {
  if (grace_period == 0) throw ArgumentError("grace period must be positive");
  if (!(split_confidence > 0.0 && split_confidence < 1.0)) {
    throw ArgumentError("split confidence must lie in (0, 1)");
  }
  if (!(tie_threshold > 0.0 && tie_threshold < 1.0)) {
    throw ArgumentError("tie threshold must lie in (0, 1)");
  }
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw ArgumentError("range must be positive");
  }
  if (!(drift_delta > 0.0 && drift_delta < 1.0)) {
    throw ArgumentError("drift delta must lie in (0, 1)");
  }
}

Instance make_instance(const FeatureVector& features, Label label,
                       std::string id) {
  const auto values = features.values();
  return {std::vector<double>(values.begin(), values.end()), label,
          std::move(id)};
}

Label majority(double votes_fail, double votes_success) {
  return votes_fail > votes_success ? Label::fail : Label::success;
}

double hoeffding_bound(double range, double delta, std::uint64_t n) {
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw ArgumentError("Hoeffding bound needs a positive range");
  }
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ArgumentError("Hoeffding bound needs delta in (0, 1]");
  }
  if (n == 0) throw ArgumentError("Hoeffding bound needs n >= 1");
  return std::sqrt(range * range * std::log(1.0 / delta) /
                   (2.0 * static_cast<double>(n)));
}

bool split_rule(double best_gain, double second_gain, double epsilon,
                double tie_threshold) {
  if (!(best_gain > 0.0)) return false;
  return best_gain - second_gain > epsilon || epsilon < tie_threshold;
}

void GaussianSummary::add(double x) {
  count += 1.0;
  const double d = x - mean;
  mean += d / count;
  m2 += d * (x - mean);
}

double GaussianSummary::variance() const {
  return count > 1.0 ? std::max(0.0, m2 / (count - 1.0)) : 0.0;
}

double GaussianSummary::fraction_at_or_below(double x) const {
  if (count <= 0.0) return 0.0;
  const double var = variance();
  if (var <= 0.0) return x >= mean ? 1.0 : 0.0;
  return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * var));
}

void LeafStats::add(std::span<const double> features, Label label) {
  class_counts[idx(label)] += 1.0;
  ++observed;
  ++instances_since_eval;
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    AttributeStats& s = attributes[a];
    const double x = features[a];
    if (!s.seen) {
      s.min = s.max = x;
      s.seen = true;
    } else {
      s.min = std::min(s.min, x);
      s.max = std::max(s.max, x);
    }
    s.per_class[idx(label)].add(x);
  }
}

std::vector<double> candidate_thresholds(const AttributeStats& stats) {
  std::vector<double> out;
  if (!stats.seen || !(stats.max > stats.min)) return out;
  const double width =
      (stats.max - stats.min) / double(kCandidatesPerAttribute);
  for (std::size_t i = 0; i < kCandidatesPerAttribute; ++i) {
    const double t = stats.min + (double(i) + 0.5) * width;
    if (t > stats.min && t < stats.max) out.push_back(t);
  }
  return out;
}

double split_gain(const AttributeStats& stats, double threshold) {
  std::array<double, 2> left{}, right{};
  double total = 0.0;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& g = stats.per_class[c];
    left[c] = g.count * g.fraction_at_or_below(threshold);
    right[c] = g.count - left[c];
    total += g.count;
  }
  const double parent =
      entropy(stats.per_class[0].count, stats.per_class[1].count);
  if (total <= 0.0 || parent <= 0.0) return 0.0;
  const double wl = left[0] + left[1];
  const double wr = right[0] + right[1];
  const double children = (wl / total) * entropy(left[0], left[1]) +
                          (wr / total) * entropy(right[0], right[1]);
  return std::max(0.0, parent - children);
}

SplitDecision evaluate_split(const LeafStats& leaf, const TreeParams& params) {
  SplitDecision d;
  if (leaf.observed == 0) return d;
  double best = 0.0, second = 0.0;
  bool have_best = false;
  for (std::size_t a = 0; a < leaf.attributes.size(); ++a) {
    double attr_best = 0.0, attr_threshold = 0.0;
    bool any = false;
    for (double t : candidate_thresholds(leaf.attributes[a])) {
      const double g = split_gain(leaf.attributes[a], t);
      if (!any || g > attr_best) {
        attr_best = g;
        attr_threshold = t;
        any = true;
      }
    }
    if (!any) continue;
    if (!have_best || attr_best > best) {
      second = have_best ? best : 0.0;
      best = attr_best;
      d.attribute = a;
      d.threshold = attr_threshold;
      have_best = true;
    } else if (attr_best > second) {
      second = attr_best;
    }
  }
  d.best_gain = best;
  d.second_gain = second;
  d.epsilon =
      hoeffding_bound(params.range, params.split_confidence, leaf.observed);
  d.should_split =
      have_best && split_rule(best, second, d.epsilon, params.tie_threshold);
  return d;
}

HoeffdingTree::HoeffdingTree(TreeParams params,
                             std::vector<std::string> attribute_names)
    : params_(params),
      names_(attribute_names.empty() ? default_names(kFeatureCount)
                                     : std::move(attribute_names)) {
  params_.validate();
  root_ = fresh_leaf();
}

HoeffdingTree::~HoeffdingTree() = default;
HoeffdingTree::HoeffdingTree(HoeffdingTree&&) noexcept = default;
HoeffdingTree& HoeffdingTree::operator=(HoeffdingTree&&) noexcept = default;

std::unique_ptr<HoeffdingTree::Node> HoeffdingTree::fresh_leaf() const {
  return std::make_unique<Node>(Node{LeafStats(names_.size())});
}

HoeffdingTree HoeffdingTree::make_stump(TreeParams params,
                                        std::vector<std::string> names,
                                        std::size_t attribute, double threshold,
                                        std::array<double, 2> left_votes,
                                        std::array<double, 2> right_votes) {
  HoeffdingTree tree(params, std::move(names));
  if (attribute >= tree.attribute_count()) {
    throw ArgumentError("stump attribute out of range");
  }
  if (!std::isfinite(threshold))
    throw ArgumentError("threshold must be finite");
  SplitNode split;
  split.attribute = attribute;
  split.threshold = threshold;
  split.left = tree.fresh_leaf();
  split.right = tree.fresh_leaf();
  // Votes are given as (fail, success).
  auto& l = std::get<LeafStats>(split.left->content).class_counts;
  l[idx(Label::fail)] = left_votes[0];
  l[idx(Label::success)] = left_votes[1];
  auto& r = std::get<LeafStats>(split.right->content).class_counts;
  r[idx(Label::fail)] = right_votes[0];
  r[idx(Label::success)] = right_votes[1];
  if (tree.params_.drift_detection)
    split.detector.emplace(tree.params_.drift_delta);
  tree.root_->content = std::move(split);
  return tree;
}

void HoeffdingTree::check_features(std::span<const double> features) const {
  if (features.size() != names_.size()) {
    throw ArgumentError("expected " + std::to_string(names_.size()) +
                        " features, got " + std::to_string(features.size()));
  }
}

const LeafStats& HoeffdingTree::route(std::span<const double> features) const {
  const Node* node = root_.get();
  while (const auto* split = std::get_if<SplitNode>(&node->content)) {
    node = features[split->attribute] <= split->threshold ? split->left.get()
                                                          : split->right.get();
  }
  return std::get<LeafStats>(node->content);
}

VoteReport HoeffdingTree::predict(std::span<const double> features) const {
  check_features(features);
  const LeafStats& leaf = route(features);
  VoteReport r;
  r.votes_fail = leaf.class_counts[idx(Label::fail)];
  r.votes_success = leaf.class_counts[idx(Label::success)];
  r.predicted = majority(r.votes_fail, r.votes_success);
  return r;
}

std::vector<DriftEvent> HoeffdingTree::train(const Instance& instance) {
  check_features(instance.features);
  for (double x : instance.features) {
    if (!std::isfinite(x)) throw ArgumentError("feature value is not finite");
  }
  const std::uint64_t index = trained_++;
  const double error =
      predict(instance.features).predicted == instance.label ? 0.0 : 1.0;

  std::vector<DriftEvent> events;
  Node* node = root_.get();
  std::string path = "root";
  while (auto* split = std::get_if<SplitNode>(&node->content)) {
    if (split->detector) {
      const DriftSignal s = split->detector->update(error);
      if (s.drift_detected && s.mean_after > s.mean_before) {
        double weight = 0.0;
        std::vector<const Node*> stack{node};
        while (!stack.empty()) {
          const Node* n = stack.back();
          stack.pop_back();
          if (const auto* sp = std::get_if<SplitNode>(&n->content)) {
            stack.push_back(sp->left.get());
            stack.push_back(sp->right.get());
          } else {
            weight += std::get<LeafStats>(n->content).weight();
          }
        }
        discarded_ += weight;
        node->content = LeafStats(names_.size());
        events.push_back({index, path, weight});
        break;
      }
    }
    const bool left = instance.features[split->attribute] <= split->threshold;
    node = left ? split->left.get() : split->right.get();
    path += left ? ".L" : ".R";
  }

  auto& leaf = std::get<LeafStats>(node->content);
  leaf.add(instance.features, instance.label);
  if (leaf.instances_since_eval >= params_.grace_period) {
    leaf.instances_since_eval = 0;
    ++split_evaluations_;
    const SplitDecision decision = evaluate_split(leaf, params_);
    if (decision.should_split) {
      splits_.push_back({index, path, decision.attribute, decision.threshold,
                         decision.best_gain});
      split_leaf(*node, decision);
    }
  }
  return events;
}

void HoeffdingTree::split_leaf(Node& node, const SplitDecision& decision) {
  const LeafStats leaf = std::get<LeafStats>(std::move(node.content));
  const AttributeStats& stats = leaf.attributes[decision.attribute];

  // Observed fraction of all mass going left, used for classes without
  // observations at this leaf.
  double seen_left = 0.0, seen_total = 0.0;
  for (const auto& g : stats.per_class) {
    seen_left += g.count * g.fraction_at_or_below(decision.threshold);
    seen_total += g.count;
  }
  const double overall = seen_total > 0.0 ? seen_left / seen_total : 0.5;

  SplitNode split;
  split.attribute = decision.attribute;
  split.threshold = decision.threshold;
  split.left = fresh_leaf();
  split.right = fresh_leaf();
  auto& l = std::get<LeafStats>(split.left->content).class_counts;
  auto& r = std::get<LeafStats>(split.right->content).class_counts;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& g = stats.per_class[c];
    const double frac =
        g.count > 0.0 ? g.fraction_at_or_below(decision.threshold) : overall;
    l[c] = leaf.class_counts[c] * frac;
    r[c] = leaf.class_counts[c] - l[c];
  }
  if (params_.drift_detection) split.detector.emplace(params_.drift_delta);
  node.content = std::move(split);
}

double HoeffdingTree::total_leaf_weight() const {
  double total = 0.0;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (const auto* sp = std::get_if<SplitNode>(&n->content)) {
      stack.push_back(sp->left.get());
      stack.push_back(sp->right.get());
    } else {
      total += std::get<LeafStats>(n->content).weight();
    }
  }
  return total;
}

std::size_t HoeffdingTree::leaf_count() const { return split_count() + 1; }

std::size_t HoeffdingTree::split_count() const {
  std::size_t count = 0;
  std::vector<const Node*> stack{root_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (const auto* sp = std::get_if<SplitNode>(&n->content)) {
      ++count;
      stack.push_back(sp->left.get());
      stack.push_back(sp->right.get());
    }
  }
  return count;
}

std::size_t HoeffdingTree::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<const Node*, std::size_t>> stack{{root_.get(), 0}};
  while (!stack.empty()) {
    auto [n, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (const auto* sp = std::get_if<SplitNode>(&n->content)) {
      stack.emplace_back(sp->left.get(), d + 1);
      stack.emplace_back(sp->right.get(), d + 1);
    }
  }
  return best;
}

std::string HoeffdingTree::render() const {
  std::ostringstream out;
  auto visit = [&](auto&& self, const Node& node, std::size_t indent) -> void {
    out << std::string(indent * 2, ' ');
    if (const auto* sp = std::get_if<SplitNode>(&node.content)) {
      out << names_[sp->attribute] << " <= " << format_number(sp->threshold)
          << '\n';
      self(self, *sp->left, indent + 1);
      self(self, *sp->right, indent + 1);
    } else {
      const auto& leaf = std::get<LeafStats>(node.content);
      out << "leaf: " << format_number(leaf.class_counts[idx(Label::fail)])
          << " | " << format_number(leaf.class_counts[idx(Label::success)])
          << '\n';
    }
  };
  visit(visit, *root_, 0);
  return out.str();
}

std::string HoeffdingTree::to_dot() const {
  std::ostringstream out;
  out << "digraph hoeffding_tree {\n  node [fontname=\"Helvetica\"];\n";
  std::size_t next = 0;
  auto visit = [&](auto&& self, const Node& node) -> std::size_t {
    const std::size_t id = next++;
    if (const auto* sp = std::get_if<SplitNode>(&node.content)) {
      out << "  n" << id << " [label=\"" << names_[sp->attribute]
          << "\", shape=ellipse];\n";
      const std::size_t l = self(self, *sp->left);
      const std::size_t r = self(self, *sp->right);
      const std::string t = format_number(sp->threshold);
      out << "  n" << id << " -> n" << l << " [label=\"<= " << t << "\"];\n";
      out << "  n" << id << " -> n" << r << " [label=\"> " << t << "\"];\n";
    } else {
      const auto& c = std::get<LeafStats>(node.content).class_counts;
      out << "  n" << id << " [label=\""
          << to_string(majority(c[idx(Label::fail)], c[idx(Label::success)]))
          << "\\n"
          << format_number(c[idx(Label::fail)]) << " | "
          << format_number(c[idx(Label::success)]) << "\", shape=box];\n";
    }
    return id;
  };
  visit(visit, *root_);
  out << "}\n";
  return out.str();
}

nlohmann::json HoeffdingTree::node_to_json(const Node& node) {
  if (const auto* sp = std::get_if<SplitNode>(&node.content)) {
    nlohmann::json j = {{"type", "split"},
                        {"attribute", sp->attribute},
                        {"threshold", sp->threshold},
                        {"left", node_to_json(*sp->left)},
                        {"right", node_to_json(*sp->right)}};
    j["detector"] = sp->detector ? sp->detector->to_json() : nlohmann::json();
    return j;
  }
  const auto& leaf = std::get<LeafStats>(node.content);
  nlohmann::json attrs = nlohmann::json::array();
  for (const auto& a : leaf.attributes) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& g : a.per_class)
      per_class.push_back({g.count, g.mean, g.m2});
    attrs.push_back({{"seen", a.seen},
                     {"min", a.min},
                     {"max", a.max},
                     {"per_class", std::move(per_class)}});
  }
  return {{"type", "leaf"},
          {"votes_fail", leaf.class_counts[idx(Label::fail)]},
          {"votes_success", leaf.class_counts[idx(Label::success)]},
          {"observed", leaf.observed},
          {"instances_since_eval", leaf.instances_since_eval},
          {"attributes", std::move(attrs)}};
}

std::unique_ptr<HoeffdingTree::Node> HoeffdingTree::node_from_json(
    const nlohmann::json& j) const {
  const std::string type = j.at("type").get<std::string>();
  if (type == "split") {
    SplitNode sp;
    sp.attribute = j.at("attribute").get<std::size_t>();
    sp.threshold = j.at("threshold").get<double>();
    if (sp.attribute >= names_.size() || !std::isfinite(sp.threshold)) {
      throw SchemaError("invalid split node");
    }
    sp.left = node_from_json(j.at("left"));
    sp.right = node_from_json(j.at("right"));
    if (j.contains("detector") && !j.at("detector").is_null()) {
      sp.detector = AdwinDetector::from_json(j.at("detector"));
    }
    return std::make_unique<Node>(Node{std::move(sp)});
  }
  if (type != "leaf") throw SchemaError("unknown node type '" + type + "'");
  LeafStats leaf(names_.size());
  leaf.class_counts[idx(Label::fail)] = j.at("votes_fail").get<double>();
  leaf.class_counts[idx(Label::success)] = j.at("votes_success").get<double>();
  leaf.observed = j.at("observed").get<std::uint64_t>();
  leaf.instances_since_eval = j.at("instances_since_eval").get<std::uint64_t>();
  const auto& attrs = j.at("attributes");
  if (attrs.size() != names_.size()) {
    throw SchemaError("leaf attribute count does not match the tree");
  }
  for (std::size_t a = 0; a < attrs.size(); ++a) {
    auto& s = leaf.attributes[a];
    s.seen = attrs[a].at("seen").get<bool>();
    s.min = attrs[a].at("min").get<double>();
    s.max = attrs[a].at("max").get<double>();
    const auto& pc = attrs[a].at("per_class");
    for (std::size_t c = 0; c < 2; ++c) {
      s.per_class[c] = {pc.at(c).at(0).get<double>(),
                        pc.at(c).at(1).get<double>(),
                        pc.at(c).at(2).get<double>()};
    }
  }
  return std::make_unique<Node>(Node{std::move(leaf)});
}

nlohmann::json HoeffdingTree::to_json() const {
  return {{"format", kTreeFormatName},
          {"version", kTreeFormatVersion},
          {"params",
           {{"grace_period", params_.grace_period},
            {"split_confidence", params_.split_confidence},
            {"tie_threshold", params_.tie_threshold},
            {"range", params_.range},
            {"drift_delta", params_.drift_delta},
            {"drift_detection", params_.drift_detection}}},
          {"attributes", names_},
          {"trained", trained_},
          {"discarded_weight", discarded_},
          {"split_evaluations", split_evaluations_},
          {"root", node_to_json(*root_)}};
}

HoeffdingTree HoeffdingTree::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kTreeFormatName) {
      throw SchemaError("not a Hoeffding tree document");
    }
    if (j.at("version").get<int>() != kTreeFormatVersion) {
      throw SchemaError("unsupported tree document version");
    }
    const auto& p = j.at("params");
    TreeParams params;
    params.grace_period = p.at("grace_period").get<std::size_t>();
    params.split_confidence = p.at("split_confidence").get<double>();
    params.tie_threshold = p.at("tie_threshold").get<double>();
    params.range = p.at("range").get<double>();
    params.drift_delta = p.at("drift_delta").get<double>();
    params.drift_detection = p.at("drift_detection").get<bool>();
    HoeffdingTree tree(params,
                       j.at("attributes").get<std::vector<std::string>>());
    tree.trained_ = j.at("trained").get<std::uint64_t>();
    tree.discarded_ = j.at("discarded_weight").get<double>();
    tree.split_evaluations_ = j.at("split_evaluations").get<std::uint64_t>();
    tree.root_ = tree.node_from_json(j.at("root"));
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid tree document: ") + e.what());
  } catch (const ArgumentError& e) {
    throw SchemaError(std::string("invalid tree document: ") + e.what());
  }
}

}  // namespace commstream
