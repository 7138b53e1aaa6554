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

// Per-build communication network and the fifteen social-network features
// derived from it.

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "commstream/label.hpp"

namespace commstream {

/// Opaque contributor identity; equality is an exact, case-sensitive match.
struct ContributorId {
  std::string value;

  auto operator<=>(const ContributorId&) const = default;
  bool operator==(const ContributorId&) const = default;
};

struct Comment {
  ContributorId author;
  std::uint64_t sequence_index = 0;
};

struct WorkItemRecord {
  std::string work_item_id;
  ContributorId creator;
  std::vector<Comment> comments;  // ordered by sequence_index
  std::set<ContributorId> subscribers;
  std::set<ContributorId> committers;
  std::uint64_t change_set_count = 0;
};

enum class BuildKind { nightly, integration, continuous, connector };

std::string_view to_string(BuildKind kind);
BuildKind parse_build_kind(std::string_view text);

struct BuildRecord {
  std::string build_id;
  std::chrono::sys_seconds started_at{};
  BuildKind kind = BuildKind::continuous;
  Label outcome = Label::success;
  std::vector<std::string> work_item_ids;
};

/// Deduplicated directed communication network. Nodes and edges are kept in
/// sorted order, so every metric is independent of input ordering.
struct CommGraph {
  std::set<ContributorId> nodes;
  std::set<std::pair<ContributorId, ContributorId>> edges;

  std::size_t node_count() const { return nodes.size(); }
  std::size_t edge_count() const { return edges.size(); }

  /// Graph on nodes "v0".."v{n-1}" with the given index pairs as edges.
  /// Self-loops are dropped.
  static CommGraph from_index_edges(std::size_t n,
                                    std::span<const std::pair<int, int>> edges);
};

/// Throws SchemaError when the record breaks its invariants.
void validate(const WorkItemRecord& item);
void validate(const BuildRecord& build);

/// Builds the communication network of one build.
///
/// Per work item: the creator links to every subscriber and committer; each
/// comment author links to the creator, to every earlier comment author and
/// to every subscriber. Self-edges are dropped and the union over the build's
/// work items is deduplicated. Throws IngestError when a work item id of the
/// build is missing from `items`.
CommGraph build_graph(const BuildRecord& build,
                      std::span<const WorkItemRecord> items);

struct DegreeMetrics {
  double group_in = 0.0;
  double group_out = 0.0;
  double group_inout = 0.0;
  double highest_in = 0.0;
  double highest_out = 0.0;
};

DegreeMetrics degree_metrics(const CommGraph& g);

/// Directed shortest-path betweenness of each node, in node order, normalized
/// by (n-1)(n-2). Empty when n < 3.
std::vector<double> node_betweenness(const CommGraph& g);

/// Betweenness of each edge, in edge order, normalized by n(n-1).
std::vector<double> edge_betweenness(const CommGraph& g);

struct BetweennessMetrics {
  double node_group = 0.0;
  double edge_group = 0.0;
  // Mean normalized edge betweenness. Diagnostic only, not a feature.
  double edge_mean = 0.0;
};

BetweennessMetrics betweenness_metrics(const CommGraph& g);

inline constexpr double kMarkovRestart = 0.15;

/// Markov centrality n / sum_{u != v} m(u, v) of each node, where m is the
/// mean first-passage time of the random walk that follows a uniformly chosen
/// out-edge and restarts uniformly with probability `restart` (always, from a
/// node without out-edges).
std::vector<double> markov_node_centrality(const CommGraph& g,
                                           double restart = kMarkovRestart);

double markov_group_centrality(const CommGraph& g,
                               double restart = kMarkovRestart);

struct StructuralHoles {
  double effective_size = 0.0;
  double efficiency = 0.0;
};

/// Burt effective size and efficiency on the undirected projection with
/// binary ties, averaged over nodes of degree >= 1.
StructuralHoles structural_holes(const CommGraph& g);

struct BasicMetrics {
  double density = 0.0;
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t work_item_count = 0;
  std::uint64_t change_set_count = 0;
};

BasicMetrics basic_metrics(const CommGraph& g, const BuildRecord& build,
                           std::span<const WorkItemRecord> items);

inline constexpr std::size_t kFeatureCount = 15;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "group_in_degree",
    "group_out_degree",
    "group_inout_degree",
    "highest_in_degree",
    "highest_out_degree",
    "node_group_betweenness",
    "edge_group_betweenness",
    "group_markov",
    "effective_size",
    "efficiency",
    "density",
    "vertex_count",
    "edge_count",
    "work_item_count",
    "change_set_count"};

struct FeatureVector {
  double group_in_degree = 0.0;
  double group_out_degree = 0.0;
  double group_inout_degree = 0.0;
  double highest_in_degree = 0.0;
  double highest_out_degree = 0.0;
  double node_group_betweenness = 0.0;
  double edge_group_betweenness = 0.0;
  double group_markov = 0.0;
  double effective_size = 0.0;
  double efficiency = 0.0;
  double density = 0.0;
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t work_item_count = 0;
  std::uint64_t change_set_count = 0;

  /// Values in kFeatureNames order.
  std::array<double, kFeatureCount> values() const;
  static FeatureVector from_values(std::span<const double> values);

  bool operator==(const FeatureVector&) const = default;
};

FeatureVector feature_vector(const BuildRecord& build,
                             std::span<const WorkItemRecord> items);

}  // namespace commstream
