// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <queue>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topogen/error.hpp"
#include "topogen/model.hpp"

namespace topogen {

// Sets reference_node of every node except the two ends to whichever end is
// closer by shortest-path length. A dummy vertex is joined to both ends with
// zero-length edges and a single Dijkstra run from it records which end each
// path leaves through; equal distances go to end1.
inline void assign_reference_nodes(Topology& topo, std::string_view end1, std::string_view end2) {
  require(end1 != end2, ErrorCode::kInvalidParams, "end nodes must differ");
  const int n = static_cast<int>(topo.node_count());
  const int e1 = static_cast<int>(topo.index_of(end1));
  const int e2 = static_cast<int>(topo.index_of(end2));
  const int dummy = n;

  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n + 1));
  for (const Link& l : topo.links()) {
    const int a = static_cast<int>(topo.index_of(l.a));
    const int b = static_cast<int>(topo.index_of(l.b));
    adj[a].emplace_back(b, l.length_km);
    adj[b].emplace_back(a, l.length_km);
  }
  adj[dummy] = {{e1, 0.0}, {e2, 0.0}};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(n + 1), kInf);
  std::vector<int> via(static_cast<std::size_t>(n + 1), -1);  // 0 = end1, 1 = end2
  using Item = std::pair<std::pair<double, int>, int>;      // ((dist, via), vertex)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[dummy] = 0.0;
  pq.push({{0.0, -1}, dummy});
  while (!pq.empty()) {
    auto [key, v] = pq.top();
    pq.pop();
    if (key.first > dist[v] || (key.first == dist[v] && key.second != via[v])) continue;
    for (auto [w, len] : adj[v]) {
      const double nd = dist[v] + len;
      const int nv = v == dummy ? (w == e1 ? 0 : 1) : via[v];
      if (nd < dist[w] || (nd == dist[w] && nv < via[w])) {
        dist[w] = nd;
        via[w] = nv;
        pq.push({{nd, nv}, w});
      }
    }
  }

  const std::string name1(end1), name2(end2);
  for (int v = 0; v < n; ++v) {
    if (v == e1 || v == e2 || via[v] < 0) continue;
    topo.node(topo.nodes()[v].name).reference_node = via[v] == 0 ? name1 : name2;
  }
}

}  // namespace topogen
