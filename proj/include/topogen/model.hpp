// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topogen/error.hpp"
#include "topogen/graph.hpp"

namespace topogen {

enum class NodeType {
  kNational,
  kRegional,
  kRegionalNoHub,
  kLocal,
  kDataCenter,
  kTransit,
  kAmplifier,
};

inline constexpr std::array<NodeType, 7> kAllNodeTypes = {
    NodeType::kNational,   NodeType::kRegional, NodeType::kRegionalNoHub,
    NodeType::kLocal,      NodeType::kDataCenter, NodeType::kTransit,
    NodeType::kAmplifier};

inline std::string_view to_string(NodeType t) {
  switch (t) {
    case NodeType::kNational: return "national";
    case NodeType::kRegional: return "regional";
    case NodeType::kRegionalNoHub: return "regional-no-hub";
    case NodeType::kLocal: return "local";
    case NodeType::kDataCenter: return "data-center";
    case NodeType::kTransit: return "transit";
    case NodeType::kAmplifier: return "amplifier";
  }
  return "?";
}

inline NodeType node_type_from_string(std::string_view s) {
  for (NodeType t : kAllNodeTypes) {
    if (to_string(t) == s) return t;
  }
  throw Error(ErrorCode::kInvalidParams, "unknown node type '" + std::string(s) + "'");
}

// Name prefix used when nodes are renamed by type and sequence (NCO14).
inline std::string_view name_prefix(NodeType t) {
  switch (t) {
    case NodeType::kNational: return "NCO";
    case NodeType::kRegional: return "RCO";
    case NodeType::kRegionalNoHub: return "RCONH";
    case NodeType::kLocal: return "LCO";
    case NodeType::kDataCenter: return "DC";
    case NodeType::kTransit: return "TR";
    case NodeType::kAmplifier: return "AMP";
  }
  return "N";
}

using ColorMap = std::map<NodeType, std::string>;

inline const ColorMap& default_colors() {
  static const ColorMap colors = {
      {NodeType::kNational, "green"},    {NodeType::kRegional, "blue"},
      {NodeType::kRegionalNoHub, "red"}, {NodeType::kLocal, "yellow"},
      {NodeType::kDataCenter, "violet"}, {NodeType::kTransit, "gray"},
      {NodeType::kAmplifier, "black"},
  };
  return colors;
}

inline std::string color_for(NodeType t, const ColorMap& colors = default_colors()) {
  if (auto it = colors.find(t); it != colors.end()) return it->second;
  return default_colors().at(t);
}

enum class Segment { kBackbone, kMetroCoreMesh, kMetroCoreRing, kMetroAggregation };

inline std::string_view to_string(Segment s) {
  switch (s) {
    case Segment::kBackbone: return "backbone";
    case Segment::kMetroCoreMesh: return "metro-core-mesh";
    case Segment::kMetroCoreRing: return "metro-core-ring";
    case Segment::kMetroAggregation: return "metro-aggregation";
  }
  return "?";
}

inline Segment segment_from_string(std::string_view s) {
  for (Segment seg : {Segment::kBackbone, Segment::kMetroCoreMesh,
                      Segment::kMetroCoreRing, Segment::kMetroAggregation}) {
    if (to_string(seg) == s) return seg;
  }
  throw Error(ErrorCode::kInvalidParams, "unknown segment '" + std::string(s) + "'");
}

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Node {
  std::string name;
  NodeType type = NodeType::kNational;
  Point pos;
  std::optional<int> cluster;
  std::optional<std::string> reference_node;
  std::string color;
  Segment segment = Segment::kBackbone;

  bool operator==(const Node&) const = default;
};

// Endpoints are stored in lexicographic order (a < b).
struct Link {
  std::string a;
  std::string b;
  double length_km = 0.0;
  Segment segment = Segment::kBackbone;

  bool operator==(const Link&) const = default;
};

using LinkKey = std::pair<std::string, std::string>;

inline LinkKey link_key(std::string_view a, std::string_view b) {
  return a < b ? LinkKey{std::string(a), std::string(b)}
               : LinkKey{std::string(b), std::string(a)};
}

// Typed, geolocated simple graph. Nodes and links keep insertion order;
// lookups go through name indices.
class Topology {
 public:
  Topology() = default;
  explicit Topology(Segment segment) : segment_(segment) {}

  Segment segment() const { return segment_; }
  void set_segment(Segment s) { segment_ = s; }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  bool empty() const { return nodes_.empty(); }

  bool has_node(std::string_view name) const {
    return node_index_.contains(std::string(name));
  }
  bool has_link(std::string_view a, std::string_view b) const {
    return link_index_.contains(link_key(a, b));
  }

  const Node& node(std::string_view name) const {
    return nodes_[index_of(name)];
  }
  Node& node(std::string_view name) { return nodes_[index_of(name)]; }
  const Link& link(std::string_view a, std::string_view b) const {
    auto it = link_index_.find(link_key(a, b));
    if (it == link_index_.end()) {
      throw Error(ErrorCode::kUnknownLink,
                  "no link " + std::string(a) + "-" + std::string(b));
    }
    return links_[it->second];
  }
  std::size_t index_of(std::string_view name) const {
    auto it = node_index_.find(std::string(name));
    if (it == node_index_.end()) {
      throw Error(ErrorCode::kUnknownNode, "no node named '" + std::string(name) + "'");
    }
    return it->second;
  }

  void add_node(Node n) {
    if (has_node(n.name)) {
      throw Error(ErrorCode::kDuplicateNode, "node '" + n.name + "' already exists");
    }
    node_index_.emplace(n.name, nodes_.size());
    nodes_.push_back(std::move(n));
  }

  // Adds a link, enforcing the simple-graph and positive-length invariants.
  void add_link(std::string_view a, std::string_view b, double length_km,
                std::optional<Segment> segment = std::nullopt) {
    if (a == b) {
      throw Error(ErrorCode::kSelfLoop, "self-loop on '" + std::string(a) + "'");
    }
    index_of(a);
    index_of(b);
    if (has_link(a, b)) {
      throw Error(ErrorCode::kDuplicateLink,
                  "link " + std::string(a) + "-" + std::string(b) + " already exists");
    }
    if (!(length_km > 0.0)) {
      throw Error(ErrorCode::kNonPositiveLength,
                  "link " + std::string(a) + "-" + std::string(b) +
                      " must have a positive length");
    }
    auto key = link_key(a, b);
    link_index_.emplace(key, links_.size());
    links_.push_back(Link{key.first, key.second, length_km, segment.value_or(segment_)});
  }

  void remove_link(std::string_view a, std::string_view b) {
    auto it = link_index_.find(link_key(a, b));
    if (it == link_index_.end()) {
      throw Error(ErrorCode::kUnknownLink,
                  "no link " + std::string(a) + "-" + std::string(b));
    }
    links_.erase(links_.begin() + static_cast<std::ptrdiff_t>(it->second));
    reindex_links();
  }

  void set_link_length(std::string_view a, std::string_view b, double length_km) {
    auto it = link_index_.find(link_key(a, b));
    if (it == link_index_.end()) {
      throw Error(ErrorCode::kUnknownLink,
                  "no link " + std::string(a) + "-" + std::string(b));
    }
    require(length_km > 0.0, ErrorCode::kNonPositiveLength, "link length must be positive");
    links_[it->second].length_km = length_km;
  }

  // Renames a node, rewriting link endpoints and reference names.
  void rename_node(std::string_view from, std::string_view to) {
    if (from == to) return;
    std::size_t idx = index_of(from);
    if (has_node(to)) {
      throw Error(ErrorCode::kDuplicateNode, "node '" + std::string(to) + "' already exists");
    }
    const std::string old_name(from), new_name(to);
    node_index_.erase(old_name);
    node_index_.emplace(new_name, idx);
    nodes_[idx].name = new_name;
    for (Node& n : nodes_) {
      if (n.reference_node == old_name) n.reference_node = new_name;
    }
    for (Link& l : links_) {
      if (l.a == old_name) l.a = new_name;
      if (l.b == old_name) l.b = new_name;
      if (l.b < l.a) std::swap(l.a, l.b);
    }
    reindex_links();
  }

  std::vector<std::string> neighbors(std::string_view name) const {
    std::vector<std::string> out;
    const std::string n(name);
    for (const Link& l : links_) {
      if (l.a == n) out.push_back(l.b);
      if (l.b == n) out.push_back(l.a);
    }
    return out;
  }

  int degree(std::string_view name) const {
    index_of(name);
    int d = 0;
    const std::string n(name);
    for (const Link& l : links_) d += (l.a == n) + (l.b == n);
    return d;
  }

  // Index graph in node insertion order.
  graph::Graph to_graph() const {
    graph::Graph g(static_cast<int>(nodes_.size()));
    for (const Link& l : links_) {
      g.add_edge(static_cast<int>(node_index_.at(l.a)),
                 static_cast<int>(node_index_.at(l.b)));
    }
    return g;
  }

  bool operator==(const Topology& o) const {
    return segment_ == o.segment_ && nodes_ == o.nodes_ && links_ == o.links_;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const LinkKey& k) const {
      return std::hash<std::string>{}(k.first) * 31 ^ std::hash<std::string>{}(k.second);
    }
  };

  void reindex_links() {
    link_index_.clear();
    for (std::size_t i = 0; i < links_.size(); ++i) {
      link_index_.emplace(LinkKey{links_[i].a, links_[i].b}, i);
    }
  }

  Segment segment_ = Segment::kBackbone;
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::unordered_map<LinkKey, std::size_t, KeyHash> link_index_;
};

// ---------------------------------------------------------------------------
// Structural queries and manual edits.

struct Survivability {
  bool connected = false;
  bool node_survivable = false;
  bool edge_survivable = false;
  bool operator==(const Survivability&) const = default;
};

inline Survivability survivability_check(const Topology& topo) {
  const graph::Graph g = topo.to_graph();
  Survivability s;
  s.connected = graph::is_connected(g);
  if (!s.connected) return s;
  const auto cuts = graph::cut_structure(g);
  s.node_survivable = cuts.articulation_points.empty();
  s.edge_survivable = cuts.bridges.empty();
  return s;
}

inline constexpr std::string_view kWarnDisconnected = "disconnected";
inline constexpr std::string_view kWarnNotTwoEdgeConnected = "no longer 2-edge-connected";

struct EditResult {
  Topology topology;
  std::vector<std::string> warnings;
};

inline std::vector<std::string> survivability_warnings(const Topology& topo) {
  const Survivability s = survivability_check(topo);
  if (!s.connected) return {std::string(kWarnDisconnected)};
  if (!s.edge_survivable) return {std::string(kWarnNotTwoEdgeConnected)};
  return {};
}

inline Topology add_link(const Topology& topo, std::string_view a,
                         std::string_view b, double length_km) {
  Topology out = topo;
  out.add_link(a, b, length_km);
  return out;
}

// Removal is always allowed; losing survivability only produces a warning.
inline EditResult drop_link(const Topology& topo, std::string_view a,
                            std::string_view b) {
  Topology out = topo;
  out.remove_link(a, b);
  auto warnings = survivability_warnings(out);
  return EditResult{std::move(out), std::move(warnings)};
}

inline std::map<int, double> degree_histogram(const Topology& topo) {
  require(!topo.empty(), ErrorCode::kEmptyTopology, "degree histogram of empty topology");
  const graph::Graph g = topo.to_graph();
  std::map<int, std::size_t> counts;
  for (int v = 0; v < g.size(); ++v) ++counts[g.degree(v)];
  std::map<int, double> hist;
  const double n = static_cast<double>(g.size());
  for (auto [d, c] : counts) hist[d] = static_cast<double>(c) / n;
  return hist;
}

// Copies nodes and links of `part` into `into`; nodes that already exist
// keep their attributes.
inline void merge_into(Topology& into, const Topology& part) {
  for (const Node& n : part.nodes()) {
    if (!into.has_node(n.name)) into.add_node(n);
  }
  for (const Link& l : part.links()) {
    if (!into.has_link(l.a, l.b)) into.add_link(l.a, l.b, l.length_km, l.segment);
  }
}

}  // namespace topogen
