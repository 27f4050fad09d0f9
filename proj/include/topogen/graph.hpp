// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Index-based undirected graph used inside the generators, plus the
// structural queries (components, bridges, articulation points, shortest
// paths) that the named topology model is built on.

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <utility>
#include <vector>

namespace topogen::graph {

using Edge = std::pair<int, int>;

inline Edge ordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Simple undirected graph on vertices [0, n). Edges are kept ordered (a < b)
// and unique.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) {}

  int size() const { return static_cast<int>(adj_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::set<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  int add_vertex() {
    adj_.emplace_back();
    return size() - 1;
  }

  bool has_edge(int a, int b) const { return edges_.contains(ordered(a, b)); }

  // Returns false for self-loops and existing edges.
  bool add_edge(int a, int b) {
    if (a == b || !edges_.insert(ordered(a, b)).second) return false;
    adj_[a].push_back(b);
    adj_[b].push_back(a);
    return true;
  }

  bool remove_edge(int a, int b) {
    if (edges_.erase(ordered(a, b)) == 0) return false;
    std::erase(adj_[a], b);
    std::erase(adj_[b], a);
    return true;
  }

  std::vector<int> degrees() const {
    std::vector<int> d(adj_.size());
    for (std::size_t v = 0; v < adj_.size(); ++v) d[v] = degree(static_cast<int>(v));
    return d;
  }

 private:
  std::vector<std::vector<int>> adj_;
  std::set<Edge> edges_;
};

// Component id per vertex; ids are dense and ordered by smallest member.
inline std::vector<int> component_labels(const Graph& g, int* count = nullptr) {
  std::vector<int> label(g.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < g.size(); ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : g.neighbors(v)) {
        if (label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

inline bool is_connected(const Graph& g) {
  int count = 0;
  component_labels(g, &count);
  return count <= 1;
}

struct CutStructure {
  std::vector<Edge> bridges;
  std::vector<int> articulation_points;
};

// Tarjan low-link, iterative so large rings do not exhaust the stack.
inline CutStructure cut_structure(const Graph& g) {
  const int n = g.size();
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1);
  std::vector<std::size_t> next_child(n, 0);
  std::vector<char> is_art(n, 0);
  CutStructure out;
  int timer = 0;
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    int root_children = 0;
    std::vector<int> stack{root};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      int v = stack.back();
      if (next_child[v] < g.neighbors(v).size()) {
        int w = g.neighbors(v)[next_child[v]++];
        if (disc[w] < 0) {
          parent[w] = v;
          disc[w] = low[w] = timer++;
          if (v == root) ++root_children;
          stack.push_back(w);
        } else if (w != parent[v]) {
          low[v] = std::min(low[v], disc[w]);
        }
        continue;
      }
      stack.pop_back();
      int p = parent[v];
      if (p < 0) continue;
      low[p] = std::min(low[p], low[v]);
      if (low[v] > disc[p]) out.bridges.push_back(ordered(p, v));
      if (p != root && low[v] >= disc[p]) is_art[p] = 1;
    }
    if (root_children > 1) is_art[root] = 1;
  }
  for (int v = 0; v < n; ++v) {
    if (is_art[v]) out.articulation_points.push_back(v);
  }
  std::sort(out.bridges.begin(), out.bridges.end());
  return out;
}

inline bool is_two_edge_connected(const Graph& g) {
  return is_connected(g) && cut_structure(g).bridges.empty();
}

// Connected and free of articulation points.
inline bool is_node_survivable(const Graph& g) {
  return is_connected(g) && cut_structure(g).articulation_points.empty();
}

// Hop distances from `source`; unreachable vertices get -1.
inline std::vector<int> bfs_hops(const Graph& g, int source) {
  std::vector<int> dist(g.size(), -1);
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : g.neighbors(v)) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

// Dijkstra over non-negative weights given per ordered edge.
inline std::vector<double> shortest_paths(
    const Graph& g, int source,
    const std::function<double(int, int)>& weight) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.size(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (int w : g.neighbors(v)) {
      double nd = d + weight(v, w);
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return dist;
}

// Number of edge-disjoint paths between two vertex sets (unit capacities,
// augmenting paths by BFS). Used by tests and by the metro mesh joiner checks.
inline int edge_disjoint_paths(const Graph& g, const std::vector<int>& sources,
                               const std::vector<int>& sinks) {
  const int n = g.size();
  const int s = n, t = n + 1;
  std::vector<std::vector<int>> cap(n + 2, std::vector<int>(n + 2, 0));
  for (auto [a, b] : g.edges()) {
    cap[a][b] += 1;
    cap[b][a] += 1;
  }
  for (int v : sources) cap[s][v] = n * n;
  for (int v : sinks) cap[v][t] = n * n;
  int flow = 0;
  for (;;) {
    std::vector<int> prev(n + 2, -1);
    prev[s] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && prev[t] < 0) {
      int v = q.front();
      q.pop();
      for (int w = 0; w < n + 2; ++w) {
        if (prev[w] < 0 && cap[v][w] > 0) {
          prev[w] = v;
          q.push(w);
        }
      }
    }
    if (prev[t] < 0) return flow;
    for (int v = t; v != s; v = prev[v]) {
      cap[prev[v]][v] -= 1;
      cap[v][prev[v]] += 1;
    }
    ++flow;
  }
}

}  // namespace topogen::graph
