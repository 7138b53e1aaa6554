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

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "commstream/label.hpp"

namespace commstream::oracle {

using Edge = std::pair<int, int>;

struct Digraph {
  int n = 0;
  std::vector<Edge> edges;  // unique, no self-loops, sorted

  bool has(int u, int v) const {
    return std::binary_search(edges.begin(), edges.end(), Edge{u, v});
  }
  std::vector<int> successors(int u) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
      if (a == u) out.push_back(b);
    }
    return out;
  }
};

/// Every digraph on n nodes (2^(n(n-1)) of them).
inline std::vector<Digraph> all_digraphs(int n) {
  std::vector<Edge> slots;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v) slots.emplace_back(u, v);
    }
  }
  std::vector<Digraph> out;
  const std::uint64_t count = std::uint64_t{1} << slots.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Digraph g{n, {}};
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (mask >> i & 1) g.edges.push_back(slots[i]);
    }
    std::sort(g.edges.begin(), g.edges.end());
    out.push_back(std::move(g));
  }
  return out;
}

inline Digraph random_digraph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Digraph g{n, {}};
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && coin(rng)) g.edges.emplace_back(u, v);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

inline double centralization(const std::vector<double>& c, double denom) {
  if (c.empty() || denom <= 0.0) return 0.0;
  const double top = *std::max_element(c.begin(), c.end());
  double s = 0.0;
  for (double x : c) s += top - x;
  return s / denom;
}

struct BetweennessOracle {
  std::vector<double> node;  // normalized by (n-1)(n-2)
  std::vector<double> edge;  // in sorted edge order, normalized by n(n-1)
  double node_group = 0.0;
  double edge_group = 0.0;
};

/// Enumerates every simple path between every ordered pair, keeps the
/// shortest ones and credits each intermediate node and edge its share.
inline BetweennessOracle brute_force_betweenness(const Digraph& g) {
  const int n = g.n;
  BetweennessOracle r;
  r.node.assign(n, 0.0);
  r.edge.assign(g.edges.size(), 0.0);
  if (n < 3) return r;

  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      std::vector<std::vector<int>> paths;
      std::vector<int> path{s};
      std::vector<bool> used(n, false);
      used[s] = true;
      auto dfs = [&](auto&& self, int u) -> void {
        if (u == t) {
          paths.push_back(path);
          return;
        }
        for (int w : g.successors(u)) {
          if (used[w]) continue;
          used[w] = true;
          path.push_back(w);
          self(self, w);
          path.pop_back();
          used[w] = false;
        }
      };
      dfs(dfs, s);
      if (paths.empty()) continue;
      std::size_t shortest = paths.front().size();
      for (const auto& p : paths) shortest = std::min(shortest, p.size());
      std::vector<const std::vector<int>*> geodesics;
      for (const auto& p : paths) {
        if (p.size() == shortest) geodesics.push_back(&p);
      }
      const double share = 1.0 / double(geodesics.size());
      for (const auto* p : geodesics) {
        for (std::size_t i = 1; i + 1 < p->size(); ++i)
          r.node[(*p)[i]] += share;
        for (std::size_t i = 0; i + 1 < p->size(); ++i) {
          const auto it = std::lower_bound(g.edges.begin(), g.edges.end(),
                                           Edge{(*p)[i], (*p)[i + 1]});
          r.edge[it - g.edges.begin()] += share;
        }
      }
    }
  }
  for (double& c : r.node) c /= double((n - 1) * (n - 2));
  for (double& c : r.edge) c /= double(n * (n - 1));
  r.node_group = centralization(r.node, double(n - 1));
  r.edge_group =
      r.edge.empty() ? 0.0 : centralization(r.edge, double(r.edge.size()));
  return r;
}

struct MarkovOracle {
  std::vector<double> node;
  double group = 0.0;
};

/// Estimates first-passage times by simulating `total_walks` walks spread
/// evenly over the ordered node pairs.
inline MarkovOracle monte_carlo_markov(const Digraph& g, double restart,
                                       std::uint64_t total_walks,
                                       std::uint64_t seed) {
  const int n = g.n;
  MarkovOracle r;
  r.node.assign(n, 0.0);
  if (n <= 1) return r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> any(0, n - 1);
  std::vector<std::vector<int>> succ(n);
  for (int u = 0; u < n; ++u) succ[u] = g.successors(u);

  const std::uint64_t per_pair = total_walks / std::uint64_t(n * (n - 1));
  for (int v = 0; v < n; ++v) {
    double total = 0.0;
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      std::uint64_t steps = 0;
      for (std::uint64_t w = 0; w < per_pair; ++w) {
        int at = u;
        while (at != v) {
          if (succ[at].empty() || unit(rng) < restart) {
            at = any(rng);
          } else {
            at = succ[at][std::uniform_int_distribution<std::size_t>(
                0, succ[at].size() - 1)(rng)];
          }
          ++steps;
        }
      }
      total += double(steps) / double(per_pair);
    }
    r.node[v] = double(n) / total;
  }
  const double top = *std::max_element(r.node.begin(), r.node.end());
  r.group = top > 0.0 ? centralization(r.node, double(n - 1) * top) : 0.0;
  return r;
}

struct HolesOracle {
  double effective_size = 0.0;
  double efficiency = 0.0;
};

/// Burt's double sum ES_i = sum_j (1 - sum_{q != i,j} p_iq m_jq) on the
/// undirected projection with binary ties.
inline HolesOracle burt_structural_holes(const Digraph& g) {
  const int n = g.n;
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (const auto& [u, v] : g.edges) a[u][v] = a[v][u] = 1;
  double es_sum = 0.0, eff_sum = 0.0;
  int counted = 0;
  for (int i = 0; i < n; ++i) {
    int degree = 0;
    for (int j = 0; j < n; ++j) degree += a[i][j];
    if (degree == 0) continue;
    double es = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!a[i][j]) continue;
      int max_tie = 0;
      for (int k = 0; k < n; ++k) max_tie = std::max(max_tie, a[j][k]);
      double redundancy = 0.0;
      for (int q = 0; q < n; ++q) {
        if (q == i || q == j) continue;
        const double p_iq = double(a[i][q]) / double(degree);
        const double m_jq = double(a[j][q]) / double(max_tie);
        redundancy += p_iq * m_jq;
      }
      es += 1.0 - redundancy;
    }
    es_sum += es;
    eff_sum += es / degree;
    ++counted;
  }
  if (counted == 0) return {};
  return {es_sum / counted, eff_sum / counted};
}

struct KnnPoint {
  std::vector<double> x;
  Label label;
};

/// Standardizes store and query with two-pass population statistics, sorts
/// every distance and votes over the first k.
inline Label brute_force_knn(const std::vector<KnnPoint>& store,
                      const std::vector<double>& query, std::size_t k) {
  const std::size_t dim = query.size();
  const double n = double(store.size());
  std::vector<double> mean(dim, 0.0), sd(dim, 0.0);
  for (const auto& p : store) {
    for (std::size_t f = 0; f < dim; ++f) mean[f] += p.x[f] / n;
  }
  for (const auto& p : store) {
    for (std::size_t f = 0; f < dim; ++f) {
      sd[f] += (p.x[f] - mean[f]) * (p.x[f] - mean[f]) / n;
    }
  }
  for (double& s : sd) s = s > 0.0 ? std::sqrt(s) : 1.0;
  auto z = [&](const std::vector<double>& x) {
    std::vector<double> out(dim);
    for (std::size_t f = 0; f < dim; ++f) out[f] = (x[f] - mean[f]) / sd[f];
    return out;
  };
  const auto q = z(query);
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto p = z(store[i].x);
    double s = 0.0;
    for (std::size_t f = 0; f < dim; ++f) s += (p[f] - q[f]) * (p[f] - q[f]);
    dist.emplace_back(std::sqrt(s), i);
  }
  std::stable_sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) {
    return a.first < b.first;
  });
  int fail = 0, success = 0;
  for (std::size_t i = 0; i < std::min(k, dist.size()); ++i) {
    (store[dist[i].second].label == Label::fail ? fail : success) += 1;
  }
  return fail > success ? Label::fail : Label::success;
}

}  // namespace commstream::oracle
