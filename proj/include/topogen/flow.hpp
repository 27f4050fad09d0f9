// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// End-to-end flow: backbone, clustering into metro regions, one metro core
// structure per region, and aggregation horseshoes on every pair of
// interconnected non-amplifier metro nodes. Everything lands in one workbook.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topogen/backbone.hpp"
#include "topogen/clustering.hpp"
#include "topogen/distributions.hpp"
#include "topogen/error.hpp"
#include "topogen/metro_agg.hpp"
#include "topogen/metro_core.hpp"
#include "topogen/model.hpp"
#include "topogen/params_json.hpp"
#include "topogen/random.hpp"
#include "topogen/workbook.hpp"

namespace topogen {

enum class MetroKind { kMesh, kNring };

inline std::string_view to_string(MetroKind k) { return k == MetroKind::kMesh ? "mesh" : "nring"; }

inline MetroKind metro_kind_from_string(std::string_view s) {
  if (s == "mesh") return MetroKind::kMesh;
  if (s == "nring" || s == "rings") return MetroKind::kNring;
  throw Error(ErrorCode::kUnknownStrategy, "unknown metro kind '" + std::string(s) + "'");
}

struct FlowConfig {
  BackboneStrategy strategy = BackboneStrategy::kTwin;
  BackboneParams backbone = [] {
    BackboneParams p;
    p.nodes = 6;
    p.type_mix = NodeTypeMix{{{NodeType::kNational, 1.0}}};
    return p;
  }();
  ClusterParams cluster = [] {
    ClusterParams c;
    c.epsilon = 0.2;
    return c;
  }();
  MetroKind metro = MetroKind::kNring;
  OccurrenceTable nring_occurrence = defaults::nring_occurrence();
  RingCatalog rings = defaults::ring_catalog();
  double ring_var = 0.1;
  MetroMeshParams mesh = [] {
    MetroMeshParams m;
    m.nodes = 20;
    return m;
  }();
  bool horseshoes = true;
  OccurrenceTable horseshoe_nodes = defaults::horseshoe_nodes();
  HorseshoeSpec horseshoe;  // lengths, prefix and colors; ends and hops are filled in
  std::uint64_t seed = 1;
  std::string output;
  WorkbookFormat format = WorkbookFormat::kCsv;

  void validate() const {
    backbone.validate(strategy == BackboneStrategy::kTwin);
    cluster.validate();
    require(ring_var >= 0.0 && ring_var < 1.0, ErrorCode::kInvalidParams, "ring_var must be in [0, 1)");
    if (metro == MetroKind::kNring) {
      nring_occurrence.validate();
      for (auto [n, p] : nring_occurrence.entries) {
        require(p == 0.0 || rings.contains(n), ErrorCode::kInvalidParams,
                "no ring configuration for " + std::to_string(n) + " rings");
      }
    }
    if (horseshoes) horseshoe_nodes.validate();
  }
};

struct FlowResult {
  Workbook workbook;
  int regions = 0;
  int metro_structures = 0;
  int horseshoes = 0;
  std::vector<std::string> warnings;
};

namespace detail {

// Picks ring ends inside a region: a node with its twin if present,
// otherwise the first two names.
inline std::optional<std::pair<std::string, std::string>> region_ends(
    const std::vector<std::string>& members) {
  std::set<std::string> set(members.begin(), members.end());
  for (const auto& m : members) {
    const std::string twin = m + std::string(kTwinSuffix);
    if (set.contains(twin)) return std::make_pair(m, twin);
  }
  if (members.size() < 2) return std::nullopt;
  return std::make_pair(members[0], members[1]);
}

// Pairs of non-amplifier nodes joined directly or through amplifiers only.
inline std::set<LinkKey> contracted_pairs(const Topology& topo) {
  std::set<LinkKey> out;
  for (const Node& start : topo.nodes()) {
    if (start.type == NodeType::kAmplifier) continue;
    std::set<std::string> seen{start.name};
    std::vector<std::string> stack{start.name};
    while (!stack.empty()) {
      const std::string cur = stack.back();
      stack.pop_back();
      for (const auto& nb : topo.neighbors(cur)) {
        if (!seen.insert(nb).second) continue;
        if (topo.node(nb).type == NodeType::kAmplifier) {
          stack.push_back(nb);
        } else {
          out.insert(link_key(start.name, nb));
        }
      }
    }
  }
  return out;
}

// Moves the nodes of `part` that are not in `anchor` so the structure sits
// around the anchor's end nodes, shrunk to `size` layout units.
inline void place_near(Topology& part, const Topology& anchor, const std::string& end1,
                       const std::string& end2, double size) {
  const Point a = anchor.node(end1).pos, b = anchor.node(end2).pos;
  const Point mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
  std::vector<std::string> names;
  for (const Node& n : part.nodes()) {
    if (!anchor.has_node(n.name)) names.push_back(n.name);
  }
  for (const auto& name : names) {
    Node& n = part.node(name);
    n.pos = Point{mid.x + n.pos.x * size, mid.y + n.pos.y * size};
  }
}

}  // namespace detail

inline FlowResult run_flow(const FlowConfig& cfg) {
  cfg.validate();
  FlowResult out;
  Workbook& wb = out.workbook;
  Rng rng(mix_seed(cfg.seed, 1));
  int structure_id = 0;
  auto next_id = [&] { return "S" + std::to_string(++structure_id); };

  BackboneParams bp = cfg.backbone;
  bp.seed = cfg.seed;
  Topology backbone = generate_backbone(cfg.strategy, bp);
  wb.structures.push_back(StructureRow{next_id(), "backbone",
                                       {{"strategy", std::string(to_string(cfg.strategy))},
                                        {"nodes", std::to_string(bp.nodes)},
                                        {"seed", std::to_string(bp.seed)}}});

  const ClusterAssignment ca = cluster_nodes(backbone, cfg.cluster);
  backbone = apply_clusters(backbone, ca);
  for (const auto& w : ca.warnings) out.warnings.push_back(w);
  wb.topology = backbone;
  wb.clusters = cluster_rows(backbone);
  const auto members_of = ca.clusters();
  const std::vector<int> regions = ca.region_labels();
  out.regions = static_cast<int>(regions.size());

  std::vector<Topology> metros;
  for (int label : regions) {
    std::vector<std::string> members = members_of.at(label);
    const std::string prefix = "M" + std::to_string(label) + "-";
    Topology metro;
    if (cfg.metro == MetroKind::kNring) {
      const auto ends = detail::region_ends(members);
      if (!ends) {
        out.warnings.push_back("region " + std::to_string(label) + " has a single node; no ring structure");
        continue;
      }
      const int nrings = sample_nring_count(cfg.nring_occurrence, rng);
      RingStructureSpec spec;
      spec.nrings = nrings;
      spec.end1 = ends->first;
      spec.end2 = ends->second;
      spec.prefix = prefix;
      spec.var = cfg.ring_var;
      spec.rings = cfg.rings.at(nrings);
      metro = generate_nring(spec, rng).topology;
      wb.structures.push_back(StructureRow{next_id(), "nring",
                                           {{"cluster", std::to_string(label)},
                                            {"nrings", std::to_string(nrings)},
                                            {"end1", spec.end1},
                                            {"end2", spec.end2},
                                            {"prefix", prefix}}});
      detail::place_near(metro, wb.topology, spec.end1, spec.end2, 0.15);
    } else {
      MetroMeshParams mp = cfg.mesh;
      mp.main_nodes = members;
      mp.name_prefix = prefix;
      mp.seed = mix_seed(cfg.seed, 100 + static_cast<std::uint64_t>(label));
      metro = generate_metro_mesh(mp);
      wb.structures.push_back(StructureRow{next_id(), "mesh",
                                           {{"cluster", std::to_string(label)},
                                            {"nodes", std::to_string(mp.nodes)},
                                            {"main_nodes", std::to_string(members.size())},
                                            {"prefix", prefix}}});
      detail::place_near(metro, wb.topology, members.front(), members.back(), 0.15);
    }
    merge_into(wb.topology, metro);
    metros.push_back(std::move(metro));
    ++out.metro_structures;
  }

  if (cfg.horseshoes) {
    int next_idx = 1;
    std::set<LinkKey> done;
    for (const Topology& metro : metros) {
      for (const auto& [a, b] : detail::contracted_pairs(metro)) {
        if (!done.insert(LinkKey{a, b}).second) continue;
        HorseshoeSpec hs = cfg.horseshoe;
        hs.end1 = a;
        hs.end2 = b;
        hs.hops = sample_hops(cfg.horseshoe_nodes, rng);
        while (true) {
          bool clash = false;
          for (int k = 0; k < hs.hops - 1 && !clash; ++k) {
            clash = wb.topology.has_node(hs.prefix + std::to_string(next_idx + k));
          }
          if (!clash) break;
          ++next_idx;
        }
        hs.idx = next_idx;
        Horseshoe h = generate_horseshoe(hs, rng);
        next_idx += hs.hops - 1;
        // Interior nodes go on the chord between the hubs, pushed slightly
        // off the line so they do not cover metro links.
        const Point pa = wb.topology.node(a).pos, pb = wb.topology.node(b).pos;
        const double dx = pb.x - pa.x, dy = pb.y - pa.y;
        const double len = std::max(std::hypot(dx, dy), 1e-9);
        for (std::size_t k = 1; k + 1 < h.path.size(); ++k) {
          Node& n = h.topology.node(h.path[k]);
          const double t = n.pos.x / h.total_km;
          n.pos = Point{pa.x + t * dx - 0.02 * dy / len, pa.y + t * dy + 0.02 * dx / len};
        }
        merge_into(wb.topology, h.topology);
        wb.structures.push_back(StructureRow{next_id(), "horseshoe",
                                             {{"end1", a},
                                              {"end2", b},
                                              {"hops", std::to_string(hs.hops)},
                                              {"idx", std::to_string(hs.idx)},
                                              {"total_km", format_fixed(h.total_km)}}});
        ++out.horseshoes;
      }
    }
  }
  check_integrity(wb);
  return out;
}

inline FlowConfig flow_config_from(const nlohmann::json& j) {
  FlowConfig c;
  json::guarded([&] {
    if (j.contains("strategy")) c.strategy = backbone_strategy_from_string(j.at("strategy").get<std::string>());
    if (j.contains("backbone")) json::read_backbone(j.at("backbone"), c.backbone);
    if (j.contains("cluster")) c.cluster = json::cluster_from(j.at("cluster"));
    if (j.contains("metro")) c.metro = metro_kind_from_string(j.at("metro").get<std::string>());
    if (j.contains("nring_occurrence")) c.nring_occurrence = json::occurrence_from(j.at("nring_occurrence"));
    if (j.contains("rings")) c.rings = json::ring_catalog_from(j.at("rings"));
    json::read(j, "ring_var", c.ring_var);
    if (j.contains("mesh")) json::read_mesh(j.at("mesh"), c.mesh);
    json::read(j, "horseshoes", c.horseshoes);
    if (j.contains("horseshoe_nodes")) c.horseshoe_nodes = json::occurrence_from(j.at("horseshoe_nodes"));
    if (j.contains("horseshoe")) json::read_horseshoe(j.at("horseshoe"), c.horseshoe);
    json::read(j, "seed", c.seed);
    json::read(j, "output", c.output);
    if (j.contains("format")) {
      const auto f = j.at("format").get<std::string>();
      require(f == "csv" || f == "json", ErrorCode::kInvalidParams, "format must be csv or json");
      c.format = f == "json" ? WorkbookFormat::kJson : WorkbookFormat::kCsv;
    }
    return 0;
  });
  c.validate();
  return c;
}

}  // namespace topogen
