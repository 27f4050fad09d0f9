// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Metro core generation: chained mesh subnets around main offices, and
// N-ring structures between two backbone nodes with amplifier sites.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "topogen/backbone.hpp"
#include "topogen/distributions.hpp"
#include "topogen/error.hpp"
#include "topogen/graph.hpp"
#include "topogen/homing.hpp"
#include "topogen/layout.hpp"
#include "topogen/metrics.hpp"
#include "topogen/model.hpp"
#include "topogen/random.hpp"

namespace topogen {

struct MetroMeshParams {
  DegreeDistribution degrees = defaults::backbone_degrees();
  NodeTypeMix type_mix = defaults::metro_types();
  int nodes = 95;
  LayoutStrategy layout = LayoutStrategy::kSpectral;
  DistanceRanges distance_ranges = defaults::metro_ranges();
  bool fit_distances = false;
  int fit_iterations = kDefaultFitIterations;
  // Existing national offices (e.g. one backbone cluster). When set, the
  // national share of type_mix is not used.
  std::vector<std::string> main_nodes;
  // Prepended to generated names so several metro regions can coexist.
  std::string name_prefix;
  std::uint64_t seed = 1;
  int max_retries = kDefaultMaxRetries;

  void validate() const {
    degrees.validate();
    type_mix.validate();
    distance_ranges.validate();
    require(nodes >= 3, ErrorCode::kInvalidParams, "a metro mesh needs at least 3 nodes");
    require(max_retries >= 1, ErrorCode::kInvalidParams, "max_retries must be positive");
    std::set<std::string> unique(main_nodes.begin(), main_nodes.end());
    require(unique.size() == main_nodes.size(), ErrorCode::kInvalidParams,
            "main node names must be unique");
    require(static_cast<int>(main_nodes.size()) <= nodes, ErrorCode::kInvalidParams,
            "more main nodes than nodes");
  }
};

struct MetroMesh {
  Topology topology;
  // Node names of each subnet, in subnet order.
  std::vector<std::vector<std::string>> subnets;
  // The links added to chain consecutive subnets.
  std::vector<LinkKey> joins;
};

namespace detail {

// Picks `count` distinct vertices among `pool`, preferring the lowest current
// degree; ties inside a degree level are broken at random.
inline std::vector<int> pick_low_degree(const graph::Graph& g, std::vector<int> pool,
                                        std::size_t count, Rng& rng) {
  shuffle(pool, rng);
  std::stable_sort(pool.begin(), pool.end(),
                   [&](int a, int b) { return g.degree(a) < g.degree(b); });
  pool.resize(std::min(count, pool.size()));
  return pool;
}

}  // namespace detail

inline MetroMesh generate_metro_mesh_detailed(const MetroMeshParams& p) {
  p.validate();
  Rng rng(p.seed);

  int subnets = static_cast<int>(p.main_nodes.size());
  std::vector<std::pair<NodeType, int>> other_counts;
  if (subnets > 0) {
    other_counts = type_counts(p.type_mix.without(NodeType::kNational), p.nodes - subnets);
  } else {
    for (auto [t, c] : type_counts(p.type_mix, p.nodes)) {
      if (t == NodeType::kNational) {
        subnets = c;
      } else {
        other_counts.emplace_back(t, c);
      }
    }
  }
  require(subnets >= 1, ErrorCode::kInvalidParams,
          "metro mesh needs at least one main (national) node");

  // Deal every non-main type round-robin so each subnet gets an even share.
  std::vector<std::vector<NodeType>> subnet_types(static_cast<std::size_t>(subnets),
                                                  std::vector<NodeType>{NodeType::kNational});
  std::size_t cursor = 0;
  for (auto [t, c] : other_counts) {
    for (int k = 0; k < c; ++k) subnet_types[cursor++ % subnet_types.size()].push_back(t);
  }

  graph::Graph g;
  std::vector<NodeType> types;
  std::vector<int> main_vertex;
  std::vector<std::vector<int>> members;
  MetroMesh out;
  for (int s = 0; s < subnets; ++s) {
    std::vector<NodeType>& st = subnet_types[s];
    const int size = static_cast<int>(st.size());
    if (size < 3) {
      throw GenerationFailed("subnet " + std::to_string(s) + " has only " +
                                 std::to_string(size) + " nodes",
                             0);
    }
    graph::Graph sub = realize_graph(
        [&] { return sample_degree_sequence(p.degrees, size, rng); }, rng,
        ConfigModelOptions{true, false, p.max_retries});
    shuffle(st, rng);
    const int offset = g.size();
    std::vector<int> mine;
    for (int v = 0; v < size; ++v) {
      mine.push_back(g.add_vertex());
      types.push_back(st[v]);
      if (st[v] == NodeType::kNational && static_cast<int>(main_vertex.size()) == s) {
        main_vertex.push_back(offset + v);
      }
    }
    for (auto [a, b] : sub.edges()) g.add_edge(offset + a, offset + b);
    if (s > 0) {
      const auto prev = detail::pick_low_degree(g, members.back(), 2, rng);
      const auto cur = detail::pick_low_degree(g, mine, 2, rng);
      for (std::size_t k = 0; k < 2; ++k) g.add_edge(prev[k], cur[k]);
    }
    members.push_back(std::move(mine));
  }

  // Names: main offices keep the given names, everything else is numbered
  // per type across the whole mesh.
  std::vector<std::string> names(types.size());
  std::map<NodeType, int> counter;
  std::set<std::string> taken(p.main_nodes.begin(), p.main_nodes.end());
  for (std::size_t v = 0; v < types.size(); ++v) {
    auto is_main = std::find(main_vertex.begin(), main_vertex.end(), static_cast<int>(v));
    if (!p.main_nodes.empty() && is_main != main_vertex.end()) {
      names[v] = p.main_nodes[static_cast<std::size_t>(is_main - main_vertex.begin())];
      continue;
    }
    std::string name;
    do {
      name = p.name_prefix + std::string(name_prefix(types[v])) + std::to_string(++counter[types[v]]);
    } while (taken.contains(name));
    taken.insert(name);
    names[v] = name;
  }

  const std::vector<Point> pos = layout_positions(g, p.layout, rng);
  const double factor = layout_factor(g, pos, p.distance_ranges, p.fit_distances, p.fit_iterations);
  out.topology = assemble_topology(g, types, names, pos, factor, Segment::kMetroCoreMesh);
  for (const auto& m : members) {
    std::vector<std::string> sn;
    for (int v : m) sn.push_back(names[v]);
    out.subnets.push_back(std::move(sn));
  }
  for (std::size_t s = 1; s < members.size(); ++s) {
    std::set<int> prev(members[s - 1].begin(), members[s - 1].end());
    for (int v : members[s]) {
      for (int w : g.neighbors(v)) {
        if (prev.contains(w)) out.joins.push_back(link_key(names[v], names[w]));
      }
    }
  }
  return out;
}

inline Topology generate_metro_mesh(const MetroMeshParams& p) {
  return generate_metro_mesh_detailed(p).topology;
}

// ---------------------------------------------------------------------------
// N-ring structures.

inline bool valid_nring_count(int n) { return n == 1 || n == 2 || n == 3 || n == 4 || n == 6; }

struct RingConfig {
  double avg_length_km = 100.0;
  int offices = 3;
  // One (min, max) per segment; offices + 1 entries.
  std::vector<std::pair<double, double>> segment_ranges;
  double max_unamplified_km = 80.0;

  void validate() const {
    require(avg_length_km > 0.0, ErrorCode::kInvalidParams, "ring length must be positive");
    require(offices >= 1, ErrorCode::kInvalidParams, "a ring needs at least one office");
    require(segment_ranges.size() == static_cast<std::size_t>(offices) + 1,
            ErrorCode::kInvalidParams, "need one segment range per segment (offices + 1)");
    for (auto [lo, hi] : segment_ranges) {
      require(lo > 0.0 && lo <= hi, ErrorCode::kInvalidParams,
              "segment ranges must satisfy 0 < min <= max");
    }
    require(max_unamplified_km > 0.0, ErrorCode::kInvalidParams,
            "max unamplified distance must be positive");
  }

  bool operator==(const RingConfig&) const = default;
};

// Ring parameters per structure size (number of rings -> config per ring).
using RingCatalog = std::map<int, std::vector<RingConfig>>;

namespace defaults {

// Illustrative values only: lengths 60-250 km, 2-6 offices per ring,
// segments within +-50% of an even split, 80 km between amplifiers.
inline RingCatalog ring_catalog() {
  RingCatalog catalog;
  for (int n : {1, 2, 3, 4, 6}) {
    std::vector<RingConfig> rings;
    for (int i = 0; i < n; ++i) {
      RingConfig rc;
      rc.offices = 2 + (i + n) % 5;
      rc.avg_length_km = 60.0 + 190.0 * ((i * 37 + n * 11) % 10) / 9.0;
      const double even = rc.avg_length_km / (rc.offices + 1);
      rc.segment_ranges.assign(static_cast<std::size_t>(rc.offices) + 1, {0.5 * even, 1.5 * even});
      rc.max_unamplified_km = 80.0;
      rings.push_back(std::move(rc));
    }
    catalog.emplace(n, std::move(rings));
  }
  return catalog;
}

}  // namespace defaults

struct RingStructureSpec {
  int nrings = 2;
  std::string end1;
  std::string end2;
  std::string prefix;
  int init_idx = 1;
  double var = 0.1;
  std::vector<RingConfig> rings;  // one per ring

  void validate() const {
    require(valid_nring_count(nrings), ErrorCode::kInvalidParams,
            "number of rings must be 1, 2, 3, 4 or 6");
    require(!end1.empty() && !end2.empty() && end1 != end2, ErrorCode::kInvalidParams,
            "end nodes must be two distinct names");
    require(var >= 0.0 && var < 1.0, ErrorCode::kInvalidParams, "var must be in [0, 1)");
    require(rings.size() == static_cast<std::size_t>(nrings), ErrorCode::kInvalidParams,
            "need one ring config per ring");
    for (const RingConfig& r : rings) r.validate();
  }
};

inline RingStructureSpec ring_spec_from_catalog(int nrings, std::string end1, std::string end2,
                                                const RingCatalog& catalog = defaults::ring_catalog()) {
  auto it = catalog.find(nrings);
  require(it != catalog.end(), ErrorCode::kInvalidParams,
          "no ring configuration for " + std::to_string(nrings) + " rings");
  RingStructureSpec spec;
  spec.nrings = nrings;
  spec.end1 = std::move(end1);
  spec.end2 = std::move(end2);
  spec.rings = it->second;
  return spec;
}

inline int sample_nring_count(const OccurrenceTable& occurrence, Rng& rng) {
  occurrence.validate();
  for (auto [n, p] : occurrence.entries) {
    require(valid_nring_count(n) || p == 0.0, ErrorCode::kInvalidParams,
            "occurrence table lists an unsupported ring count");
  }
  return occurrence.sample(rng);
}

struct RingStructure {
  Topology topology;
  std::vector<double> ring_totals_km;             // drawn total per ring
  std::vector<std::vector<std::string>> ring_paths;  // end1 ... end2 per ring
};

// Segment lengths of one ring, before shuffling: uniform draws inside each
// range with the last segment absorbing the remainder. A non-positive
// remainder is replaced by the last range's minimum and the other segments
// shrink proportionally so the total is kept.
inline std::vector<double> draw_ring_segments(const RingConfig& rc, double total, Rng& rng) {
  std::vector<double> seg;
  double sum = 0.0;
  for (int j = 0; j < rc.offices; ++j) {
    auto [lo, hi] = rc.segment_ranges[j];
    const double len = lo == hi ? lo : uniform(rng, lo, hi);
    seg.push_back(len);
    sum += len;
  }
  double last = total - sum;
  if (last <= 0.0) {
    last = rc.segment_ranges.back().first;
    if (!(total > last)) {
      throw Error(ErrorCode::kInvalidParams,
                  "segment ranges cannot fit a ring of " + std::to_string(total) + " km");
    }
    const double shrink = (total - last) / sum;
    sum = 0.0;
    for (double& s : seg) {
      s *= shrink;
      sum += s;
    }
    last = total - sum;
  }
  seg.push_back(last);
  return seg;
}

inline RingStructure generate_nring(const RingStructureSpec& spec, Rng& rng) {
  spec.validate();
  static constexpr char kSuffixes[] = "ABCDEF";
  RingStructure out;
  Topology& topo = out.topology;
  topo.set_segment(Segment::kMetroCoreRing);
  auto add = [&](const std::string& name, NodeType type) {
    if (topo.has_node(name)) {
      throw Error(ErrorCode::kInvalidParams, "ring node name '" + name + "' collides");
    }
    Node node;
    node.name = name;
    node.type = type;
    node.color = color_for(type);
    node.segment = Segment::kMetroCoreRing;
    topo.add_node(std::move(node));
  };
  add(spec.end1, NodeType::kNational);
  add(spec.end2, NodeType::kNational);

  const std::string stem = spec.prefix + std::to_string(spec.nrings);
  for (int i = 0; i < spec.nrings; ++i) {
    const RingConfig& rc = spec.rings[i];
    const std::string suffix(1, kSuffixes[i]);
    const double l = rc.avg_length_km;
    const double total = spec.var == 0.0 ? l : uniform(rng, l * (1.0 - spec.var), l * (1.0 + spec.var));
    std::vector<double> seg = draw_ring_segments(rc, total, rng);
    shuffle(seg, rng);

    std::vector<std::string> path{spec.end1};
    std::vector<double> hops;
    int amp = 0;
    for (std::size_t j = 0; j < seg.size(); ++j) {
      const double len = seg[j];
      const int pieces = std::max(1, static_cast<int>(std::ceil(len / rc.max_unamplified_km)));
      const double piece = len / pieces;
      for (int k = 1; k < pieces; ++k) {
        const std::string name = stem + "AMP" + std::to_string(++amp) + suffix;
        add(name, NodeType::kAmplifier);
        path.push_back(name);
        hops.push_back(piece);
      }
      hops.push_back(len - piece * (pieces - 1));
      if (j + 1 < seg.size()) {
        const std::string office = stem + std::to_string(spec.init_idx + static_cast<int>(j)) + suffix;
        add(office, NodeType::kRegional);
        path.push_back(office);
      } else {
        path.push_back(spec.end2);
      }
    }
    for (std::size_t k = 0; k + 1 < path.size(); ++k) topo.add_link(path[k], path[k + 1], hops[k]);
    out.ring_totals_km.push_back(total);
    out.ring_paths.push_back(std::move(path));
  }

  const std::vector<Point> pos = layout_positions(topo.to_graph(), LayoutStrategy::kSpring, rng);
  for (std::size_t v = 0; v < pos.size(); ++v) topo.node(topo.nodes()[v].name).pos = pos[v];
  assign_reference_nodes(topo, spec.end1, spec.end2);
  return out;
}

}  // namespace topogen
