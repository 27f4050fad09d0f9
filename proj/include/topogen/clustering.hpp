// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Metro region creation: DBSCAN over node positions, optionally split by
// graph connectivity, with merging of single-node clusters.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "topogen/error.hpp"
#include "topogen/graph.hpp"
#include "topogen/model.hpp"

namespace topogen {

enum class ClusterMode { kDistance, kDistanceConnectivity };

inline std::string_view to_string(ClusterMode m) {
  return m == ClusterMode::kDistance ? "distance" : "distance-connectivity";
}

inline ClusterMode cluster_mode_from_string(std::string_view s) {
  if (s == "distance") return ClusterMode::kDistance;
  if (s == "distance-connectivity" || s == "connectivity") return ClusterMode::kDistanceConnectivity;
  throw Error(ErrorCode::kUnknownStrategy, "unknown cluster mode '" + std::string(s) + "'");
}

struct ClusterParams {
  double epsilon = 0.3;
  bool avoid_single = true;
  ClusterMode mode = ClusterMode::kDistance;
  int min_points = 1;

  void validate() const {
    require(epsilon > 0.0, ErrorCode::kInvalidParams, "epsilon must be positive");
    require(min_points >= 1, ErrorCode::kInvalidParams, "min_points must be >= 1");
  }
};

struct ClusterAssignment {
  std::map<std::string, int> labels;
  int transit_label = 0;
  std::vector<std::string> warnings;

  // Members per label, names sorted.
  std::map<int, std::vector<std::string>> clusters() const {
    std::map<int, std::vector<std::string>> out;
    for (const auto& [name, label] : labels) out[label].push_back(name);
    return out;
  }

  // Labels other than the transit group.
  std::vector<int> region_labels() const {
    std::set<int> s;
    for (const auto& [name, label] : labels) {
      if (label != transit_label) s.insert(label);
    }
    return {s.begin(), s.end()};
  }

  bool operator==(const ClusterAssignment&) const = default;
};

// 2-d tree for nearest-neighbor queries with an acceptance filter.
class KdTree {
 public:
  explicit KdTree(std::vector<Point> points) : points_(std::move(points)) {
    std::vector<int> idx(points_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    root_ = build(idx, 0, idx.size(), 0);
  }

  // Index of the nearest accepted point, or -1. Ties go to the lower index.
  int nearest(const Point& q, const std::function<bool(int)>& accept) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    search(root_.get(), q, accept, best, best_d);
    return best;
  }

 private:
  struct KdNode {
    int point;
    int axis;
    std::unique_ptr<KdNode> left, right;
  };

  std::unique_ptr<KdNode> build(std::vector<int>& idx, std::size_t lo, std::size_t hi, int depth) {
    if (lo >= hi) return nullptr;
    const int axis = depth % 2;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi, [&](int a, int b) {
      const double ka = axis == 0 ? points_[a].x : points_[a].y;
      const double kb = axis == 0 ? points_[b].x : points_[b].y;
      return ka < kb || (ka == kb && a < b);
    });
    auto node = std::make_unique<KdNode>();
    node->point = idx[mid];
    node->axis = axis;
    node->left = build(idx, lo, mid, depth + 1);
    node->right = build(idx, mid + 1, hi, depth + 1);
    return node;
  }

  void search(const KdNode* node, const Point& q, const std::function<bool(int)>& accept,
              int& best, double& best_d) const {
    if (!node) return;
    const Point& p = points_[node->point];
    if (accept(node->point)) {
      const double d = std::hypot(p.x - q.x, p.y - q.y);
      if (d < best_d || (d == best_d && node->point < best)) {
        best_d = d;
        best = node->point;
      }
    }
    const double delta = node->axis == 0 ? q.x - p.x : q.y - p.y;
    const KdNode* near = delta < 0 ? node->left.get() : node->right.get();
    const KdNode* far = delta < 0 ? node->right.get() : node->left.get();
    search(near, q, accept, best, best_d);
    if (std::abs(delta) <= best_d) search(far, q, accept, best, best_d);
  }

  std::vector<Point> points_;
  std::unique_ptr<KdNode> root_;
};

// Plain DBSCAN with Euclidean distance. Noise points come back as -1.
inline std::vector<int> dbscan(const std::vector<Point>& pts, double epsilon, int min_points) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) <= epsilon) nbrs[i].push_back(j);
    }
  }
  auto is_core = [&](int i) { return static_cast<int>(nbrs[i].size()) >= min_points; };
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0 || !is_core(i)) continue;
    label[i] = next;
    std::vector<int> frontier{i};
    while (!frontier.empty()) {
      int v = frontier.back();
      frontier.pop_back();
      if (!is_core(v)) continue;
      for (int w : nbrs[v]) {
        if (label[w] < 0) {
          label[w] = next;
          frontier.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

inline ClusterAssignment cluster_nodes(const Topology& topo, const ClusterParams& p) {
  p.validate();
  std::vector<std::size_t> members;  // topology indices of non-transit nodes
  for (std::size_t i = 0; i < topo.node_count(); ++i) {
    if (topo.nodes()[i].type != NodeType::kTransit) members.push_back(i);
  }
  require(!members.empty(), ErrorCode::kInvalidParams, "no non-transit nodes to cluster");

  // Sort by name so that processing order and label numbering are stable.
  std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
    return topo.nodes()[a].name < topo.nodes()[b].name;
  });
  const int m = static_cast<int>(members.size());
  std::vector<Point> pts;
  for (std::size_t i : members) pts.push_back(topo.nodes()[i].pos);

  graph::Graph local(m);
  {
    std::map<std::string, int> slot;
    for (int k = 0; k < m; ++k) slot[topo.nodes()[members[k]].name] = k;
    for (const Link& l : topo.links()) {
      auto a = slot.find(l.a), b = slot.find(l.b);
      if (a != slot.end() && b != slot.end()) local.add_edge(a->second, b->second);
    }
  }

  std::vector<int> label = dbscan(pts, p.epsilon, p.min_points);
  int next = 1 + *std::max_element(label.begin(), label.end());
  for (int& l : label) {
    if (l < 0) l = next++;  // noise becomes singleton clusters
  }

  if (p.mode == ClusterMode::kDistanceConnectivity) {
    // Split each cluster into the connected pieces of its induced subgraph.
    graph::Graph induced(m);
    for (auto [a, b] : local.edges()) {
      if (label[a] == label[b]) induced.add_edge(a, b);
    }
    label = graph::component_labels(induced);
  }

  ClusterAssignment out;
  if (p.avoid_single && m >= 2) {
    KdTree tree(pts);
    for (int v = 0; v < m; ++v) {
      const auto size = std::count(label.begin(), label.end(), label[v]);
      if (size != 1) continue;
      int target = -1;
      if (p.mode == ClusterMode::kDistance) {
        target = tree.nearest(pts[v], [&](int u) { return u != v; });
      } else {
        target = tree.nearest(pts[v], [&](int u) { return u != v && local.has_edge(u, v); });
      }
      if (target < 0) {
        out.warnings.push_back("node '" + topo.nodes()[members[v]].name +
                               "' has no connected neighbor to merge with");
        continue;
      }
      label[v] = label[target];
    }
  }

  // Renumber densely in order of each cluster's first (smallest) name.
  std::map<int, int> dense;
  for (int v = 0; v < m; ++v) {
    if (!dense.contains(label[v])) {
      const int id = static_cast<int>(dense.size());
      dense[label[v]] = id;
    }
  }
  for (int v = 0; v < m; ++v) out.labels[topo.nodes()[members[v]].name] = dense[label[v]];
  out.transit_label = static_cast<int>(dense.size());
  for (const Node& n : topo.nodes()) {
    if (n.type == NodeType::kTransit) out.labels[n.name] = out.transit_label;
  }
  return out;
}

// Copies cluster labels onto the nodes.
inline Topology apply_clusters(const Topology& topo, const ClusterAssignment& c) {
  Topology out = topo;
  for (const auto& [name, label] : c.labels) {
    if (out.has_node(name)) out.node(name).cluster = label;
  }
  return out;
}

}  // namespace topogen
