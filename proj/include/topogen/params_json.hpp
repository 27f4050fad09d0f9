// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// JSON readers and writers for generator parameters and results. Readers
// start from the defaults and override only the keys present.

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topogen/backbone.hpp"
#include "topogen/clustering.hpp"
#include "topogen/distributions.hpp"
#include "topogen/error.hpp"
#include "topogen/layout.hpp"
#include "topogen/metrics.hpp"
#include "topogen/metro_agg.hpp"
#include "topogen/metro_core.hpp"
#include "topogen/model.hpp"

namespace topogen::json {

using Json = nlohmann::json;

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidParams, std::string("bad parameter JSON: ") + e.what());
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

// {"2": 0.227, ...}, [[2, 0.227], ...] or "2:0.227,...".
inline DegreeDistribution degrees_from(const Json& j) {
  return guarded([&] {
    if (j.is_string()) return parse_degree_distribution(j.get<std::string>());
    DegreeDistribution d;
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) d.entries.emplace_back(std::stoi(k), v.get<double>());
      std::sort(d.entries.begin(), d.entries.end());
    } else {
      for (const auto& e : j) d.entries.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
    }
    d.validate();
    return d;
  });
}

inline Json to_json(const DegreeDistribution& d) {
  Json j = Json::object();
  for (auto [k, p] : d.entries) j[std::to_string(k)] = p;
  return j;
}

inline NodeTypeMix type_mix_from(const Json& j) {
  return guarded([&] {
    if (j.is_string()) return parse_type_mix(j.get<std::string>());
    NodeTypeMix m;
    for (const auto& [k, v] : j.items()) m.entries.emplace_back(node_type_from_string(k), v.get<double>());
    m.validate();
    return m;
  });
}

inline Json to_json(const NodeTypeMix& m) {
  Json j = Json::object();
  for (auto [t, p] : m.entries) j[std::string(to_string(t))] = p;
  return j;
}

inline OccurrenceTable occurrence_from(const Json& j) {
  return guarded([&] {
    OccurrenceTable t;
    if (j.is_object()) {
      for (const auto& [k, v] : j.items()) t.entries.emplace_back(std::stoi(k), v.get<double>());
      std::sort(t.entries.begin(), t.entries.end());
    } else {
      for (const auto& e : j) t.entries.emplace_back(e.at(0).get<int>(), e.at(1).get<double>());
    }
    t.validate();
    return t;
  });
}

inline Json to_json(const OccurrenceTable& t) {
  Json j = Json::object();
  for (auto [k, p] : t.entries) j[std::to_string(k)] = p;
  return j;
}

// {"bins": [[0, 50], ...], "target": [...]}
inline DistanceRanges ranges_from(const Json& j) {
  return guarded([&] {
    DistanceRanges r;
    r.bins = j.at("bins").get<std::vector<std::pair<double, double>>>();
    read(j, "target", r.target);
    r.validate();
    return r;
  });
}

inline Json to_json(const DistanceRanges& r) {
  return Json{{"bins", r.bins}, {"target", r.target}};
}

inline void read_backbone(const Json& j, BackboneParams& p) {
  guarded([&] {
    read(j, "nodes", p.nodes);
    if (j.contains("degrees")) p.degrees = degrees_from(j.at("degrees"));
    if (j.contains("type_mix")) p.type_mix = type_mix_from(j.at("type_mix"));
    if (j.contains("layout")) p.layout = layout_from_string(j.at("layout").get<std::string>());
    if (j.contains("distance_ranges")) p.distance_ranges = ranges_from(j.at("distance_ranges"));
    read(j, "fit_distances", p.fit_distances);
    read(j, "fit_iterations", p.fit_iterations);
    read(j, "twin_distance_range", p.twin_distance_range);
    read(j, "seed", p.seed);
    read(j, "max_retries", p.max_retries);
    return 0;
  });
}

inline Json to_json(const BackboneParams& p) {
  return Json{{"nodes", p.nodes},
              {"degrees", to_json(p.degrees)},
              {"type_mix", to_json(p.type_mix)},
              {"layout", to_string(p.layout)},
              {"distance_ranges", to_json(p.distance_ranges)},
              {"fit_distances", p.fit_distances},
              {"fit_iterations", p.fit_iterations},
              {"twin_distance_range", p.twin_distance_range},
              {"seed", p.seed},
              {"max_retries", p.max_retries}};
}

// Region strategy: shared keys come from the backbone block, the rest from
// the same object.
inline WaxmanRegionParams region_from(const Json& j, const BackboneParams& base) {
  WaxmanRegionParams p;
  p.nodes = base.nodes;
  p.avg_degree = base.degrees.mean();
  p.type_mix = base.type_mix;
  p.distance_ranges = base.distance_ranges;
  p.fit_distances = base.fit_distances;
  p.fit_iterations = base.fit_iterations;
  p.seed = base.seed;
  guarded([&] {
    read(j, "regions", p.regions);
    read(j, "avg_degree", p.avg_degree);
    read(j, "min_node_distance", p.min_node_distance);
    read(j, "alpha", p.waxman_alpha);
    read(j, "beta", p.waxman_beta);
    read(j, "width", p.width);
    read(j, "height", p.height);
    read(j, "placement_attempts", p.placement_attempts);
    return 0;
  });
  return p;
}

inline ClusterParams cluster_from(const Json& j) {
  ClusterParams p;
  guarded([&] {
    read(j, "epsilon", p.epsilon);
    read(j, "avoid_single", p.avoid_single);
    if (j.contains("mode")) p.mode = cluster_mode_from_string(j.at("mode").get<std::string>());
    read(j, "min_points", p.min_points);
    return 0;
  });
  p.validate();
  return p;
}

inline Json to_json(const ClusterParams& p) {
  return Json{{"epsilon", p.epsilon},
              {"avoid_single", p.avoid_single},
              {"mode", to_string(p.mode)},
              {"min_points", p.min_points}};
}

inline void read_mesh(const Json& j, MetroMeshParams& p) {
  guarded([&] {
    read(j, "nodes", p.nodes);
    if (j.contains("degrees")) p.degrees = degrees_from(j.at("degrees"));
    if (j.contains("type_mix")) p.type_mix = type_mix_from(j.at("type_mix"));
    if (j.contains("layout")) p.layout = layout_from_string(j.at("layout").get<std::string>());
    if (j.contains("distance_ranges")) p.distance_ranges = ranges_from(j.at("distance_ranges"));
    read(j, "fit_distances", p.fit_distances);
    read(j, "fit_iterations", p.fit_iterations);
    read(j, "main_nodes", p.main_nodes);
    read(j, "name_prefix", p.name_prefix);
    read(j, "seed", p.seed);
    read(j, "max_retries", p.max_retries);
    return 0;
  });
}

inline RingConfig ring_config_from(const Json& j) {
  RingConfig rc;
  guarded([&] {
    read(j, "avg_length_km", rc.avg_length_km);
    read(j, "offices", rc.offices);
    read(j, "segment_ranges", rc.segment_ranges);
    read(j, "max_unamplified_km", rc.max_unamplified_km);
    return 0;
  });
  if (rc.segment_ranges.empty() && rc.offices >= 1) {
    const double even = rc.avg_length_km / (rc.offices + 1);
    rc.segment_ranges.assign(static_cast<std::size_t>(rc.offices) + 1, {0.5 * even, 1.5 * even});
  }
  rc.validate();
  return rc;
}

inline Json to_json(const RingConfig& rc) {
  return Json{{"avg_length_km", rc.avg_length_km},
              {"offices", rc.offices},
              {"segment_ranges", rc.segment_ranges},
              {"max_unamplified_km", rc.max_unamplified_km}};
}

// {"1": [ring, ...], "2": [...], ...}, optionally wrapped as
// {"structures": {...}} next to descriptive keys.
inline RingCatalog ring_catalog_from(const Json& j) {
  return guarded([&] {
    const Json& body = j.contains("structures") ? j.at("structures") : j;
    RingCatalog c;
    for (const auto& [k, v] : body.items()) {
      std::vector<RingConfig> rings;
      for (const auto& r : v) rings.push_back(ring_config_from(r));
      c.emplace(std::stoi(k), std::move(rings));
    }
    return c;
  });
}

inline Json to_json(const RingCatalog& c) {
  Json j = Json::object();
  for (const auto& [n, rings] : c) {
    Json arr = Json::array();
    for (const auto& r : rings) arr.push_back(to_json(r));
    j[std::to_string(n)] = arr;
  }
  return j;
}

// Missing "rings" fall back to the catalog entry for nrings.
inline RingStructureSpec ring_spec_from(const Json& j, const RingCatalog& catalog) {
  return guarded([&] {
    RingStructureSpec s;
    read(j, "nrings", s.nrings);
    read(j, "end1", s.end1);
    read(j, "end2", s.end2);
    read(j, "prefix", s.prefix);
    read(j, "init_idx", s.init_idx);
    read(j, "var", s.var);
    if (j.contains("rings")) {
      for (const auto& r : j.at("rings")) s.rings.push_back(ring_config_from(r));
    } else if (auto it = catalog.find(s.nrings); it != catalog.end()) {
      s.rings = it->second;
    }
    s.validate();
    return s;
  });
}

inline std::vector<LengthRange> length_ranges_from(const Json& j) {
  return guarded([&] {
    std::vector<LengthRange> out;
    for (const auto& e : j) {
      out.push_back(LengthRange{e.at("low").get<double>(), e.at("high").get<double>(),
                                e.at("probability").get<double>()});
    }
    return out;
  });
}

inline Json to_json(const std::vector<LengthRange>& ranges) {
  Json j = Json::array();
  for (const auto& r : ranges) j.push_back({{"low", r.low}, {"high", r.high}, {"probability", r.probability}});
  return j;
}

inline ColorMap colors_from(const Json& j) {
  return guarded([&] {
    ColorMap m = default_colors();
    for (const auto& [k, v] : j.items()) m[node_type_from_string(k)] = v.get<std::string>();
    return m;
  });
}

inline void read_horseshoe(const Json& j, HorseshoeSpec& s) {
  guarded([&] {
    read(j, "end1", s.end1);
    read(j, "end2", s.end2);
    read(j, "hops", s.hops);
    read(j, "idx", s.idx);
    read(j, "prefix", s.prefix);
    if (j.contains("len_ranges")) s.len_ranges = length_ranges_from(j.at("len_ranges"));
    if (j.contains("colors")) s.colors = colors_from(j.at("colors"));
    read(j, "loc_local", s.loc_local);
    return 0;
  });
}

inline Json to_json(const ValidationReport& r) {
  Json degree_target = Json::object(), degree_achieved = Json::object();
  for (auto [k, v] : r.degree_target) degree_target[std::to_string(k)] = v;
  for (auto [k, v] : r.degree_achieved) degree_achieved[std::to_string(k)] = v;
  Json j{{"degree_target", degree_target},
         {"degree_achieved", degree_achieved},
         {"degree_mape", r.degree_mape},
         {"other_mass", r.other_mass},
         {"distance_bins", r.distance_bins},
         {"distance_target", r.distance_target},
         {"distance_achieved", r.distance_achieved},
         {"distance_out_of_range", r.distance_out_of_range}};
  j["distance_mape"] = r.distance_mape ? Json(*r.distance_mape) : Json(nullptr);
  return j;
}

inline Json to_json(const Node& n) {
  Json j{{"name", n.name},
         {"type", to_string(n.type)},
         {"x", n.pos.x},
         {"y", n.pos.y},
         {"color", n.color},
         {"segment", to_string(n.segment)}};
  j["cluster"] = n.cluster ? Json(*n.cluster) : Json(nullptr);
  j["reference_node"] = n.reference_node ? Json(*n.reference_node) : Json(nullptr);
  return j;
}

inline Json to_json(const Link& l) {
  return Json{{"source", l.a}, {"target", l.b}, {"length_km", l.length_km},
              {"segment", to_string(l.segment)}};
}

inline Json to_json(const Topology& t) {
  Json nodes = Json::array(), links = Json::array();
  for (const Node& n : t.nodes()) nodes.push_back(to_json(n));
  for (const Link& l : t.links()) links.push_back(to_json(l));
  return Json{{"segment", to_string(t.segment())}, {"nodes", nodes}, {"links", links}};
}

inline Json to_json(const Survivability& s) {
  return Json{{"connected", s.connected},
              {"node_survivable", s.node_survivable},
              {"edge_survivable", s.edge_survivable}};
}

}  // namespace topogen::json
