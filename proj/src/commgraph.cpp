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

#include "commstream/commgraph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <unordered_map>

#include "commstream/errors.hpp"

namespace commstream {

namespace {

// Dense index view of a CommGraph: node i is the i-th node in sorted order.
struct IndexedGraph {
  std::size_t n = 0;
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> in;
  std::vector<std::pair<int, int>> edges;  // CommGraph edge order
};

IndexedGraph index_graph(const CommGraph& g) {
  IndexedGraph ig;
  ig.n = g.nodes.size();
  ig.out.resize(ig.n);
  ig.in.resize(ig.n);
  std::map<ContributorId, int> index;
  int next = 0;
  for (const auto& node : g.nodes) index.emplace(node, next++);
  ig.edges.reserve(g.edges.size());
  for (const auto& [from, to] : g.edges) {
    const int u = index.at(from);
    const int v = index.at(to);
    ig.out[u].push_back(v);
    ig.in[v].push_back(u);
    ig.edges.emplace_back(u, v);
  }
  return ig;
}

// Freeman centralization sum_i (c_max - c_i) / denom.
double centralization(const std::vector<double>& scores, double denom) {
  if (scores.empty() || denom <= 0.0) return 0.0;
  const double c_max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double c : scores) sum += c_max - c;
  return std::clamp(sum / denom, 0.0, 1.0);
}

struct BrandesResult {
  std::vector<double> node;  // raw pair-dependency sums
  std::vector<double> edge;
};

BrandesResult brandes(const IndexedGraph& g) {
  const std::size_t n = g.n;
  BrandesResult r{std::vector<double>(n, 0.0),
                  std::vector<double>(g.edges.size(), 0.0)};
  std::map<std::pair<int, int>, std::size_t> edge_index;
  for (std::size_t e = 0; e < g.edges.size(); ++e) edge_index[g.edges[e]] = e;

  std::vector<double> sigma(n), delta(n);
  std::vector<int> dist(n);
  std::vector<std::vector<int>> preds(n);
  std::vector<int> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    order.clear();

    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<int> queue;
    queue.push(static_cast<int>(s));
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      order.push_back(v);
      for (int w : g.out[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (int v : preds[w]) {
        const double share = sigma[v] / sigma[w] * (1.0 + delta[w]);
        delta[v] += share;
        r.edge[edge_index.at({v, w})] += share;
      }
      if (w != static_cast<int>(s)) r.node[w] += delta[w];
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(BuildKind kind) {
  switch (kind) {
    case BuildKind::nightly:
      return "nightly";
    case BuildKind::integration:
      return "integration";
    case BuildKind::continuous:
      return "continuous";
    case BuildKind::connector:
      return "connector";
  }
  return "continuous";
}

BuildKind parse_build_kind(std::string_view text) {
  if (text == "nightly") return BuildKind::nightly;
  if (text == "integration") return BuildKind::integration;
  if (text == "continuous") return BuildKind::continuous;
  if (text == "connector") return BuildKind::connector;
  throw SchemaError("unknown build kind '" + std::string(text) + "'");
}

Label parse_label(std::string_view text) {
  if (text == "success") return Label::success;
  if (text == "fail") return Label::fail;
  throw SchemaError("unknown outcome '" + std::string(text) + "'");
}

CommGraph CommGraph::from_index_edges(
    std::size_t n, std::span<const std::pair<int, int>> edges) {
  CommGraph g;
  std::vector<ContributorId> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back({"v" + std::to_string(i)});
    g.nodes.insert(ids.back());
  }
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    g.edges.emplace(ids.at(u), ids.at(v));
  }
  return g;
}

void validate(const WorkItemRecord& item) {
  if (item.work_item_id.empty()) throw SchemaError("work item without id");
  const auto where = " in work item '" + item.work_item_id + "'";
  if (item.creator.value.empty()) throw SchemaError("empty creator" + where);
  for (std::size_t i = 0; i < item.comments.size(); ++i) {
    if (item.comments[i].author.value.empty()) {
      throw SchemaError("comment with empty author" + where);
    }
    if (i > 0 && item.comments[i].sequence_index <=
                     item.comments[i - 1].sequence_index) {
      throw SchemaError("comment sequence not strictly increasing" + where);
    }
  }
  for (const auto* set : {&item.subscribers, &item.committers}) {
    for (const auto& id : *set) {
      if (id.value.empty()) throw SchemaError("empty contributor id" + where);
    }
  }
}

void validate(const BuildRecord& build) {
  if (build.build_id.empty()) throw SchemaError("build without id");
}

CommGraph build_graph(const BuildRecord& build,
                      std::span<const WorkItemRecord> items) {
  validate(build);
  std::unordered_map<std::string_view, const WorkItemRecord*> by_id;
  for (const auto& item : items) by_id.emplace(item.work_item_id, &item);

  CommGraph g;
  auto link = [&g](const ContributorId& from, const ContributorId& to) {
    if (from != to) g.edges.emplace(from, to);
  };
  for (const auto& id : build.work_item_ids) {
    auto found = by_id.find(id);
    if (found == by_id.end()) {
      throw IngestError("build '" + build.build_id +
                        "' references unknown work item '" + id + "'");
    }
    const WorkItemRecord& item = *found->second;
    validate(item);

    g.nodes.insert(item.creator);
    for (const auto& s : item.subscribers) {
      g.nodes.insert(s);
      link(item.creator, s);
    }
    for (const auto& c : item.committers) {
      g.nodes.insert(c);
      link(item.creator, c);
    }
    for (std::size_t i = 0; i < item.comments.size(); ++i) {
      const ContributorId& author = item.comments[i].author;
      g.nodes.insert(author);
      link(author, item.creator);
      for (std::size_t j = 0; j < i; ++j) link(author, item.comments[j].author);
      for (const auto& s : item.subscribers) link(author, s);
    }
  }
  return g;
}

DegreeMetrics degree_metrics(const CommGraph& g) {
  const IndexedGraph ig = index_graph(g);
  if (ig.n <= 1) return {};
  const double norm = static_cast<double>(ig.n - 1);
  std::vector<double> in(ig.n), out(ig.n), inout(ig.n);
  for (std::size_t i = 0; i < ig.n; ++i) {
    in[i] = static_cast<double>(ig.in[i].size()) / norm;
    out[i] = static_cast<double>(ig.out[i].size()) / norm;
    inout[i] =
        static_cast<double>(ig.in[i].size() + ig.out[i].size()) / (2.0 * norm);
  }
  DegreeMetrics m;
  m.highest_in = *std::max_element(in.begin(), in.end());
  m.highest_out = *std::max_element(out.begin(), out.end());
  m.group_in = centralization(in, norm);
  m.group_out = centralization(out, norm);
  m.group_inout = centralization(inout, norm);
  return m;
}

std::vector<double> node_betweenness(const CommGraph& g) {
  const IndexedGraph ig = index_graph(g);
  if (ig.n < 3) return {};
  auto scores = brandes(ig).node;
  const double norm = static_cast<double>((ig.n - 1) * (ig.n - 2));
  for (double& c : scores) c /= norm;
  return scores;
}

std::vector<double> edge_betweenness(const CommGraph& g) {
  const IndexedGraph ig = index_graph(g);
  if (ig.n < 2) return std::vector<double>(ig.edges.size(), 0.0);
  auto scores = brandes(ig).edge;
  const double norm = static_cast<double>(ig.n * (ig.n - 1));
  for (double& c : scores) c /= norm;
  return scores;
}

BetweennessMetrics betweenness_metrics(const CommGraph& g) {
  const IndexedGraph ig = index_graph(g);
  if (ig.n < 3) return {};
  const BrandesResult raw = brandes(ig);

  std::vector<double> node = raw.node;
  const double node_norm = static_cast<double>((ig.n - 1) * (ig.n - 2));
  for (double& c : node) c /= node_norm;

  std::vector<double> edge = raw.edge;
  const double edge_norm = static_cast<double>(ig.n * (ig.n - 1));
  for (double& c : edge) c /= edge_norm;

  BetweennessMetrics m;
  m.node_group = centralization(node, static_cast<double>(ig.n - 1));
  if (!edge.empty()) {
    m.edge_group = centralization(edge, static_cast<double>(edge.size()));
    double sum = 0.0;
    for (double c : edge) sum += c;
    m.edge_mean = sum / static_cast<double>(edge.size());
  }
  return m;
}

std::vector<double> markov_node_centrality(const CommGraph& g, double restart) {
  if (!(restart > 0.0 && restart <= 1.0)) {
    throw ArgumentError("restart probability must be in (0, 1]");
  }
  const IndexedGraph ig = index_graph(g);
  const auto n = static_cast<Eigen::Index>(ig.n);
  if (n <= 1) return std::vector<double>(ig.n, 0.0);

  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(n, n, restart / double(n));
  for (Eigen::Index u = 0; u < n; ++u) {
    const auto& succ = ig.out[u];
    if (succ.empty()) {
      p.row(u).setConstant(1.0 / double(n));
      continue;
    }
    const double step = (1.0 - restart) / double(succ.size());
    for (int w : succ) p(u, w) += step;
  }

  std::vector<double> centrality(ig.n);
  Eigen::MatrixXd system(n - 1, n - 1);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n - 1);
  for (Eigen::Index v = 0; v < n; ++v) {
    // m(u, v) = 1 + sum_{w != v} P(u, w) m(w, v) over u != v.
    for (Eigen::Index r = 0, u = 0; u < n; ++u) {
      if (u == v) continue;
      for (Eigen::Index c = 0, w = 0; w < n; ++w) {
        if (w == v) continue;
        system(r, c) = (u == w ? 1.0 : 0.0) - p(u, w);
        ++c;
      }
      ++r;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) {
      throw NumericsError("first-passage system is singular");
    }
    const Eigen::VectorXd passage = lu.solve(ones);
    const double total = passage.sum();
    if (!std::isfinite(total) || total <= 0.0) {
      throw NumericsError("first-passage times are not finite");
    }
    centrality[v] = double(n) / total;
  }
  return centrality;
}

double markov_group_centrality(const CommGraph& g, double restart) {
  const auto c = markov_node_centrality(g, restart);
  if (c.size() <= 1) return 0.0;
  const double c_max = *std::max_element(c.begin(), c.end());
  if (c_max <= 0.0) return 0.0;
  return centralization(c, static_cast<double>(c.size() - 1) * c_max);
}

StructuralHoles structural_holes(const CommGraph& g) {
  const IndexedGraph ig = index_graph(g);
  std::vector<std::set<int>> adj(ig.n);
  for (const auto& [u, v] : ig.edges) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  double es_sum = 0.0, eff_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < ig.n; ++i) {
    const auto& nbrs = adj[i];
    if (nbrs.empty()) continue;
    std::size_t ties = 0;
    for (int j : nbrs) {
      for (int q : adj[j]) {
        if (q > j && nbrs.contains(q)) ++ties;
      }
    }
    const double d = static_cast<double>(nbrs.size());
    const double es = d - 2.0 * static_cast<double>(ties) / d;
    es_sum += es;
    eff_sum += es / d;
    ++counted;
  }
  if (counted == 0) return {};
  return {es_sum / double(counted), eff_sum / double(counted)};
}

BasicMetrics basic_metrics(const CommGraph& g, const BuildRecord& build,
                           std::span<const WorkItemRecord> items) {
  BasicMetrics m;
  const std::size_t n = g.node_count();
  m.vertex_count = n;
  m.edge_count = g.edge_count();
  if (n > 1) {
    m.density =
        static_cast<double>(g.edge_count()) / static_cast<double>(n * (n - 1));
  }
  std::unordered_map<std::string_view, const WorkItemRecord*> by_id;
  for (const auto& item : items) by_id.emplace(item.work_item_id, &item);
  const std::set<std::string_view> ids(build.work_item_ids.begin(),
                                       build.work_item_ids.end());
  m.work_item_count = ids.size();
  for (auto id : ids) {
    auto found = by_id.find(id);
    if (found == by_id.end()) {
      throw IngestError("build '" + build.build_id +
                        "' references unknown work item '" + std::string(id) +
                        "'");
    }
    m.change_set_count += found->second->change_set_count;
  }
  return m;
}

std::array<double, kFeatureCount> FeatureVector::values() const {
  return {group_in_degree,
          group_out_degree,
          group_inout_degree,
          highest_in_degree,
          highest_out_degree,
          node_group_betweenness,
          edge_group_betweenness,
          group_markov,
          effective_size,
          efficiency,
          density,
          static_cast<double>(vertex_count),
          static_cast<double>(edge_count),
          static_cast<double>(work_item_count),
          static_cast<double>(change_set_count)};
}

FeatureVector FeatureVector::from_values(std::span<const double> v) {
  if (v.size() != kFeatureCount) {
    throw ArgumentError("expected " + std::to_string(kFeatureCount) +
                        " feature values, got " + std::to_string(v.size()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw ArgumentError("feature value is not finite");
  }
  auto count = [](double x, std::string_view name) {
    if (x < 0.0 || x != std::floor(x)) {
      throw ArgumentError(std::string(name) +
                          " must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(x);
  };
  FeatureVector f;
  f.group_in_degree = v[0];
  f.group_out_degree = v[1];
  f.group_inout_degree = v[2];
  f.highest_in_degree = v[3];
  f.highest_out_degree = v[4];
  f.node_group_betweenness = v[5];
  f.edge_group_betweenness = v[6];
  f.group_markov = v[7];
  f.effective_size = v[8];
  f.efficiency = v[9];
  f.density = v[10];
  f.vertex_count = count(v[11], kFeatureNames[11]);
  f.edge_count = count(v[12], kFeatureNames[12]);
  f.work_item_count = count(v[13], kFeatureNames[13]);
  f.change_set_count = count(v[14], kFeatureNames[14]);
  return f;
}

FeatureVector feature_vector(const BuildRecord& build,
                             std::span<const WorkItemRecord> items) {
  const CommGraph g = build_graph(build, items);
  const DegreeMetrics deg = degree_metrics(g);
  const BetweennessMetrics btw = betweenness_metrics(g);
  const StructuralHoles holes = structural_holes(g);
  const BasicMetrics basic = basic_metrics(g, build, items);

  FeatureVector f;
  f.group_in_degree = deg.group_in;
  f.group_out_degree = deg.group_out;
  f.group_inout_degree = deg.group_inout;
  f.highest_in_degree = deg.highest_in;
  f.highest_out_degree = deg.highest_out;
  f.node_group_betweenness = btw.node_group;
  f.edge_group_betweenness = btw.edge_group;
  f.group_markov = markov_group_centrality(g);
  f.effective_size = holes.effective_size;
  f.efficiency = holes.efficiency;
  f.density = basic.density;
  f.vertex_count = basic.vertex_count;
  f.edge_count = basic.edge_count;
  f.work_item_count = basic.work_item_count;
  f.change_set_count = basic.change_set_count;
  return f;
}

}  // namespace commstream
