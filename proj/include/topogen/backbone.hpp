// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Backbone generation: configuration-model mesh, twin nodes and the
// region/Waxman strategy, plus the bridge-repair augmentation they share.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topogen/distributions.hpp"
#include "topogen/error.hpp"
#include "topogen/graph.hpp"
#include "topogen/layout.hpp"
#include "topogen/metrics.hpp"
#include "topogen/model.hpp"
#include "topogen/random.hpp"

namespace topogen {

inline constexpr int kDefaultMaxRetries = 1000;

enum class BackboneStrategy { kMesh, kTwin, kRegion };

inline std::string_view to_string(BackboneStrategy s) {
  switch (s) {
    case BackboneStrategy::kMesh: return "default";
    case BackboneStrategy::kTwin: return "twin";
    case BackboneStrategy::kRegion: return "region";
  }
  return "?";
}

inline BackboneStrategy backbone_strategy_from_string(std::string_view s) {
  if (s == "default" || s == "mesh") return BackboneStrategy::kMesh;
  if (s == "twin" || s == "dual") return BackboneStrategy::kTwin;
  if (s == "region" || s == "waxman") return BackboneStrategy::kRegion;
  throw Error(ErrorCode::kUnknownStrategy, "unknown backbone strategy '" + std::string(s) + "'");
}

struct BackboneParams {
  int nodes = 50;
  DegreeDistribution degrees = defaults::backbone_degrees();
  NodeTypeMix type_mix = defaults::backbone_types();
  LayoutStrategy layout = LayoutStrategy::kSpectral;
  DistanceRanges distance_ranges = defaults::backbone_ranges();
  bool fit_distances = false;
  int fit_iterations = kDefaultFitIterations;
  // Twin offset per coordinate, in layout units.
  std::pair<double, double> twin_distance_range{0.01, 0.05};
  std::uint64_t seed = 1;
  int max_retries = kDefaultMaxRetries;

  void validate(bool twin) const {
    require(nodes >= 3, ErrorCode::kInvalidParams, "a backbone needs at least 3 nodes");
    degrees.validate();
    type_mix.validate();
    distance_ranges.validate();
    require(max_retries >= 1, ErrorCode::kInvalidParams, "max_retries must be positive");
    require(fit_iterations >= 1, ErrorCode::kInvalidParams, "fit_iterations must be positive");
    for (auto [t, f] : type_mix.entries) {
      require(t != NodeType::kAmplifier || f == 0.0, ErrorCode::kInvalidParams,
              "amplifiers cannot be part of a backbone");
    }
    if (twin) {
      require(nodes % 2 == 0, ErrorCode::kInvalidParams, "twin strategy needs an even node count");
      require(nodes >= 6, ErrorCode::kInvalidParams, "twin strategy needs at least 6 nodes");
      require(twin_distance_range.first >= 0.0 &&
                  twin_distance_range.first <= twin_distance_range.second &&
                  twin_distance_range.second > 0.0,
              ErrorCode::kInvalidParams, "invalid twin distance range");
    }
  }
};

// ---------------------------------------------------------------------------
// Degree sequences and the configuration model.

// An odd total is fixed by adding one to a random node among those holding
// the minimum degree.
inline void make_sum_even(std::vector<int>& deg, Rng& rng) {
  if (std::accumulate(deg.begin(), deg.end(), 0) % 2 == 0) return;
  const int lowest = *std::min_element(deg.begin(), deg.end());
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    if (deg[i] == lowest) candidates.push_back(i);
  }
  deg[candidates[uniform_index(rng, candidates.size())]] += 1;
}

// Draws n degrees i.i.d., then evens out the total.
inline std::vector<int> sample_degree_sequence(const DegreeDistribution& dist, int n, Rng& rng) {
  require(n >= 2, ErrorCode::kInvalidParams, "need at least 2 nodes");
  std::vector<int> deg(static_cast<std::size_t>(n));
  for (int& d : deg) d = dist.sample(rng);
  make_sum_even(deg, rng);
  return deg;
}


// Random stub pairing; self-loops and parallel edges are dropped.
inline graph::Graph pair_stubs(std::span<const int> degrees, Rng& rng,
                               std::size_t* dropped = nullptr) {
  std::vector<int> stubs;
  for (std::size_t v = 0; v < degrees.size(); ++v) {
    stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[v]), static_cast<int>(v));
  }
  shuffle(stubs, rng);
  graph::Graph g(static_cast<int>(degrees.size()));
  std::size_t lost = 0;
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    if (!g.add_edge(stubs[i], stubs[i + 1])) ++lost;
  }
  if (dropped) *dropped = lost;
  return g;
}

using DistanceFn = std::function<double(int, int)>;

// Adds links until `g` is connected and bridgeless. Disconnected pieces are
// chained first; bridges are then repaired by pairing leaves of the bridge
// tree in DFS order, which uses ceil(leaves / 2) links. Between two blocks
// the closest vertex pair under `distance` is used (ties to lower indices).
inline std::vector<graph::Edge> augment_two_edge_connected(graph::Graph& g,
                                                           const DistanceFn& distance = {}) {
  std::vector<graph::Edge> added;
  const int n = g.size();
  if (n < 2) return added;
  auto dist = [&](int a, int b) { return distance ? distance(a, b) : 0.0; };
  auto closest_pair = [&](const std::vector<int>& xs, const std::vector<int>& ys) {
    graph::Edge best{-1, -1};
    double best_d = std::numeric_limits<double>::infinity();
    for (int a : xs) {
      for (int b : ys) {
        if (a == b || g.has_edge(a, b)) continue;
        const double d = dist(a, b);
        if (d < best_d) {
          best_d = d;
          best = {a, b};
        }
      }
    }
    return best;
  };
  auto link = [&](graph::Edge e) {
    if (e.first >= 0 && g.add_edge(e.first, e.second)) added.push_back(graph::ordered(e.first, e.second));
  };

  int comps = 0;
  std::vector<int> label = graph::component_labels(g, &comps);
  if (comps > 1) {
    std::vector<std::vector<int>> members(static_cast<std::size_t>(comps));
    for (int v = 0; v < n; ++v) members[label[v]].push_back(v);
    for (int c = 1; c < comps; ++c) link(closest_pair(members[c - 1], members[c]));
  }

  for (int round = 0; round < n; ++round) {
    const auto cuts = graph::cut_structure(g);
    if (cuts.bridges.empty()) break;
    // Blocks = components once bridges are removed.
    graph::Graph core = g;
    for (auto [a, b] : cuts.bridges) core.remove_edge(a, b);
    int blocks = 0;
    std::vector<int> block = graph::component_labels(core, &blocks);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(blocks));
    for (int v = 0; v < n; ++v) members[block[v]].push_back(v);
    graph::Graph tree(blocks);
    for (auto [a, b] : cuts.bridges) tree.add_edge(block[a], block[b]);
    int root = 0;
    for (int b = 0; b < blocks; ++b) {
      if (tree.degree(b) > 1) {
        root = b;
        break;
      }
    }
    std::vector<int> leaves;
    std::vector<char> seen(static_cast<std::size_t>(blocks), 0);
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      if (seen[b]) continue;
      seen[b] = 1;
      if (tree.degree(b) == 1) leaves.push_back(b);
      auto nbrs = tree.neighbors(b);
      std::sort(nbrs.rbegin(), nbrs.rend());
      for (int c : nbrs) {
        if (!seen[c]) stack.push_back(c);
      }
    }
    const std::size_t k = leaves.size();
    const std::size_t half = k / 2;
    const std::size_t before = added.size();
    for (std::size_t i = 0; i < half; ++i) {
      link(closest_pair(members[leaves[i]], members[leaves[i + half]]));
    }
    if (k % 2 == 1 && k > 1) link(closest_pair(members[leaves[k - 1]], members[leaves[0]]));
    if (added.size() == before) break;  // nothing left to try (e.g. two lone vertices)
  }
  return added;
}

struct ConfigModelOptions {
  // Accept only connected graphs without articulation points (and repair
  // bridges afterwards).
  bool require_survivable = true;
  // Reject pairings that lost stubs to self-loops or parallel edges.
  bool require_exact_degrees = false;
  int max_retries = kDefaultMaxRetries;
};

// Draws a degree sequence from `next_degrees`, pairs stubs and validates,
// repeating on failure. Returns a graph that satisfies `opt`.
template <typename DegreeSource>
graph::Graph realize_graph(DegreeSource&& next_degrees, Rng& rng, const ConfigModelOptions& opt) {
  require(opt.max_retries >= 1, ErrorCode::kInvalidParams, "max_retries must be positive");
  for (int attempt = 1; attempt <= opt.max_retries; ++attempt) {
    const std::vector<int> degrees = next_degrees();
    require(degrees.size() >= 2, ErrorCode::kInvalidParams, "need at least 2 nodes");
    require(std::accumulate(degrees.begin(), degrees.end(), 0) % 2 == 0,
            ErrorCode::kInvalidParams, "degree sum must be even");
    std::size_t dropped = 0;
    graph::Graph g = pair_stubs(degrees, rng, &dropped);
    if (opt.require_exact_degrees && dropped > 0) continue;
    if (!opt.require_survivable) return g;
    if (!graph::is_node_survivable(g)) continue;
    augment_two_edge_connected(g);
    if (graph::is_two_edge_connected(g)) return g;
  }
  throw GenerationFailed("no valid configuration-model graph", opt.max_retries);
}

// Configuration model over a fixed degree list.
inline graph::Graph configuration_model(std::span<const int> degrees, Rng& rng,
                                        const ConfigModelOptions& opt = {}) {
  const std::vector<int> fixed(degrees.begin(), degrees.end());
  return realize_graph([&] { return fixed; }, rng, opt);
}

// ---------------------------------------------------------------------------
// Shared assembly.

inline std::vector<std::string> sequential_names(std::span<const NodeType> types) {
  std::map<NodeType, int> counter;
  std::vector<std::string> names;
  names.reserve(types.size());
  for (NodeType t : types) {
    names.push_back(std::string(name_prefix(t)) + std::to_string(++counter[t]));
  }
  return names;
}

inline std::vector<double> euclidean_lengths(const graph::Graph& g, std::span<const Point> pos) {
  std::vector<double> lengths;
  lengths.reserve(g.edge_count());
  for (auto [a, b] : g.edges()) {
    lengths.push_back(std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y));
  }
  return lengths;
}

// Builds the named topology; link lengths are Euclidean layout length x factor.
inline Topology assemble_topology(const graph::Graph& g, std::span<const NodeType> types,
                                  std::span<const std::string> names, std::span<const Point> pos,
                                  double factor, Segment segment) {
  Topology topo(segment);
  for (int v = 0; v < g.size(); ++v) {
    Node node;
    node.name = names[v];
    node.type = types[v];
    node.pos = pos[v];
    node.color = color_for(types[v]);
    node.segment = segment;
    topo.add_node(std::move(node));
  }
  const std::vector<double> lengths = euclidean_lengths(g, pos);
  std::size_t i = 0;
  for (auto [a, b] : g.edges()) {
    topo.add_link(names[a], names[b], lengths[i++] * factor);
  }
  return topo;
}

inline double layout_factor(const graph::Graph& g, std::span<const Point> pos,
                            const DistanceRanges& ranges, bool fit, int iterations) {
  return scale_factor(euclidean_lengths(g, pos), ranges, fit, iterations);
}

// ---------------------------------------------------------------------------
// Strategies.

inline Topology generate_mesh_backbone(const BackboneParams& p) {
  p.validate(false);
  Rng rng(p.seed);
  graph::Graph g = realize_graph(
      [&] { return sample_degree_sequence(p.degrees, p.nodes, rng); }, rng,
      ConfigModelOptions{true, false, p.max_retries});
  const std::vector<NodeType> types = assign_types(p.type_mix, p.nodes, rng);
  const std::vector<std::string> names = sequential_names(types);
  const std::vector<Point> pos = layout_positions(g, p.layout, rng);
  const double factor = layout_factor(g, pos, p.distance_ranges, p.fit_distances, p.fit_iterations);
  return assemble_topology(g, types, names, pos, factor, Segment::kBackbone);
}

inline constexpr std::string_view kTwinSuffix = "_TW";

// Halved network with degrees 2d - 2, then every non-transit node gets a
// co-located twin that takes half of its external links plus a link to it.
inline Topology generate_twin_backbone(const BackboneParams& p) {
  p.validate(true);
  const DegreeDistribution reduced_dist = p.degrees.twin_reduced();
  Rng rng(p.seed);

  int transit = 0;
  for (auto [t, c] : type_counts(p.type_mix, p.nodes)) {
    if (t == NodeType::kTransit) transit = c;
  }
  transit -= transit % 2;  // n = 2 * (reduced - transit) + transit must hold
  const int paired = (p.nodes - transit) / 2;
  const int reduced = paired + transit;

  std::vector<NodeType> types(static_cast<std::size_t>(transit), NodeType::kTransit);
  if (paired > 0) {
    const NodeTypeMix rest = transit > 0 || p.type_mix.fraction(NodeType::kTransit) > 0.0
                                 ? p.type_mix.without(NodeType::kTransit)
                                 : p.type_mix;
    const auto others = assign_types(rest, paired, rng);
    types.insert(types.end(), others.begin(), others.end());
  }
  shuffle(types, rng);

  graph::Graph g = realize_graph(
      [&] {
        std::vector<int> deg(static_cast<std::size_t>(reduced));
        for (int v = 0; v < reduced; ++v) {
          deg[v] = types[v] == NodeType::kTransit ? p.degrees.sample(rng) : reduced_dist.sample(rng);
        }
        make_sum_even(deg, rng);
        return deg;
      },
      rng, ConfigModelOptions{true, false, p.max_retries});

  std::vector<std::string> names = sequential_names(types);
  std::vector<Point> pos = layout_positions(g, p.layout, rng);

  const auto [dmin, dmax] = p.twin_distance_range;
  for (int v = 0; v < reduced; ++v) {
    if (types[v] == NodeType::kTransit) continue;
    const int twin = g.add_vertex();
    auto offset = [&] {
      const double mag = uniform(rng, dmin, dmax);
      return uniform01(rng) < 0.5 ? -mag : mag;
    };
    const double dx = offset();
    const double dy = offset();
    pos.push_back(Point{pos[v].x + dx, pos[v].y + dy});
    types.push_back(types[v]);
    names.push_back(names[v] + std::string(kTwinSuffix));
    std::vector<int> external = g.neighbors(v);
    std::sort(external.begin(), external.end());
    shuffle(external, rng);
    const std::size_t moved = external.size() / 2;
    for (std::size_t i = 0; i < moved; ++i) {
      g.remove_edge(v, external[i]);
      g.add_edge(twin, external[i]);
    }
    g.add_edge(v, twin);
  }

  if (!graph::is_two_edge_connected(g)) {
    augment_two_edge_connected(g, [&](int a, int b) {
      return std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y);
    });
  }
  const double factor = layout_factor(g, pos, p.distance_ranges, p.fit_distances, p.fit_iterations);
  return assemble_topology(g, types, names, pos, factor, Segment::kBackbone);
}

struct WaxmanRegionParams {
  int nodes = 50;
  int regions = 9;
  double avg_degree = 3.18;
  double min_node_distance = 0.02;
  double waxman_alpha = 0.4;
  double waxman_beta = 0.1;
  double width = 1.0;
  double height = 1.0;
  NodeTypeMix type_mix = defaults::backbone_types();
  DistanceRanges distance_ranges = defaults::backbone_ranges();
  bool fit_distances = false;
  int fit_iterations = kDefaultFitIterations;
  std::uint64_t seed = 1;
  int placement_attempts = 10000;

  void validate() const {
    require(nodes >= 3, ErrorCode::kInvalidParams, "need at least 3 nodes");
    require(regions >= 1 && regions <= nodes, ErrorCode::kInvalidParams,
            "regions must be between 1 and the node count");
    require(avg_degree >= 2.0, ErrorCode::kInvalidParams, "average degree must be >= 2");
    require(avg_degree <= nodes - 1, ErrorCode::kInvalidParams,
            "average degree exceeds a complete graph");
    require(min_node_distance > 0.0, ErrorCode::kInvalidParams,
            "minimum node distance must be positive");
    require(waxman_alpha > 0.0 && waxman_alpha <= 1.0 && waxman_beta > 0.0 && waxman_beta <= 1.0,
            ErrorCode::kInvalidParams, "Waxman alpha and beta must be in (0, 1]");
    require(width > 0.0 && height > 0.0, ErrorCode::kInvalidParams, "plane must have a positive area");
    type_mix.validate();
    distance_ranges.validate();
  }
};

inline double waxman_probability(double distance, double diagonal, double alpha, double beta) {
  return beta * std::exp(-distance / (alpha * diagonal));
}

// Nodes spread over a grid of regions with a minimum spacing, a survivable
// cycle threaded region by region, then Waxman links up to the target
// average degree.
inline Topology generate_region_backbone(const WaxmanRegionParams& p) {
  p.validate();
  Rng rng(p.seed);

  int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(p.regions))));
  while (p.regions % rows != 0) --rows;
  const int cols = p.regions / rows;
  const double cell_w = p.width / cols;
  const double cell_h = p.height / rows;

  // Serpentine region order keeps consecutive regions adjacent.
  std::vector<std::pair<int, int>> order;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) order.emplace_back(r, r % 2 == 0 ? c : cols - 1 - c);
  }
  std::vector<int> per_region(static_cast<std::size_t>(p.regions), p.nodes / p.regions);
  for (int i = 0; i < p.nodes % p.regions; ++i) per_region[i] += 1;

  const double cell_diagonal = std::hypot(cell_w, cell_h);
  if (p.min_node_distance > cell_diagonal &&
      *std::max_element(per_region.begin(), per_region.end()) >= 2) {
    throw Error(ErrorCode::kInvalidParams,
                "minimum node distance exceeds the region diagonal");
  }

  std::vector<Point> pos;
  std::vector<int> region_of;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const double x0 = order[r].second * cell_w;
    const double y0 = order[r].first * cell_h;
    for (int k = 0; k < per_region[r]; ++k) {
      bool placed = false;
      for (int attempt = 0; attempt < p.placement_attempts && !placed; ++attempt) {
        const Point cand{uniform(rng, x0, x0 + cell_w), uniform(rng, y0, y0 + cell_h)};
        placed = std::all_of(pos.begin(), pos.end(), [&](const Point& q) {
          return std::hypot(q.x - cand.x, q.y - cand.y) >= p.min_node_distance;
        });
        if (placed) {
          pos.push_back(cand);
          region_of.push_back(static_cast<int>(r));
        }
      }
      if (!placed) {
        throw Error(ErrorCode::kInvalidParams,
                    "could not place nodes with the requested minimum distance");
      }
    }
  }

  const int n = p.nodes;
  graph::Graph g(n);
  // Within each region: nearest-neighbor path entering from the previous
  // region's exit node; consecutive regions are joined and the tour closed.
  std::vector<int> tour;
  for (int r = 0; r < p.regions; ++r) {
    std::vector<int> left;
    for (int v = 0; v < n; ++v) {
      if (region_of[v] == r) left.push_back(v);
    }
    Point from = tour.empty() ? Point{order[r].second * cell_w, order[r].first * cell_h}
                              : pos[tour.back()];
    while (!left.empty()) {
      auto it = std::min_element(left.begin(), left.end(), [&](int a, int b) {
        return std::hypot(pos[a].x - from.x, pos[a].y - from.y) <
               std::hypot(pos[b].x - from.x, pos[b].y - from.y);
      });
      tour.push_back(*it);
      from = pos[*it];
      left.erase(it);
    }
  }
  for (int i = 0; i < n; ++i) g.add_edge(tour[i], tour[(i + 1) % n]);

  const auto target_links = static_cast<std::size_t>(std::ceil(p.avg_degree * n / 2.0 - 1e-9));
  const double diagonal = std::hypot(p.width, p.height);
  const std::size_t max_draws = 10'000'000;
  for (std::size_t draw = 0; g.edge_count() < target_links; ++draw) {
    if (draw >= max_draws) throw GenerationFailed("Waxman fill did not converge", static_cast<int>(draw));
    const int a = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    const int b = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    if (a == b || g.has_edge(a, b)) continue;
    const double d = std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y);
    if (uniform01(rng) < waxman_probability(d, diagonal, p.waxman_alpha, p.waxman_beta)) {
      g.add_edge(a, b);
    }
  }

  const std::vector<NodeType> types = assign_types(p.type_mix, n, rng);
  const std::vector<std::string> names = sequential_names(types);
  const double factor = layout_factor(g, pos, p.distance_ranges, p.fit_distances, p.fit_iterations);
  return assemble_topology(g, types, names, pos, factor, Segment::kBackbone);
}

inline Topology generate_backbone(BackboneStrategy strategy, const BackboneParams& p) {
  switch (strategy) {
    case BackboneStrategy::kMesh: return generate_mesh_backbone(p);
    case BackboneStrategy::kTwin: return generate_twin_backbone(p);
    case BackboneStrategy::kRegion: {
      WaxmanRegionParams w;
      w.nodes = p.nodes;
      w.avg_degree = p.degrees.mean();
      w.type_mix = p.type_mix;
      w.distance_ranges = p.distance_ranges;
      w.fit_distances = p.fit_distances;
      w.fit_iterations = p.fit_iterations;
      w.seed = p.seed;
      return generate_region_backbone(w);
    }
  }
  throw Error(ErrorCode::kUnknownStrategy, "unknown backbone strategy");
}

}  // namespace topogen
