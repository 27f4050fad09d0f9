// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Metro aggregation horseshoes: an open chain of local offices between two
// regional hubs, laid out on a straight line.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topogen/distributions.hpp"
#include "topogen/error.hpp"
#include "topogen/homing.hpp"
#include "topogen/model.hpp"
#include "topogen/random.hpp"

namespace topogen {

struct LengthRange {
  double low = 0.0;
  double high = 0.0;
  double probability = 0.0;

  bool operator==(const LengthRange&) const = default;
};

namespace defaults {

inline std::vector<LengthRange> horseshoe_lengths() {
  return {{15.0, 40.0, 0.20}, {40.0, 80.0, 0.30}, {80.0, 130.0, 0.25},
          {130.0, 200.0, 0.15}, {200.0, 302.0, 0.10}};
}

}  // namespace defaults

struct HorseshoeSpec {
  std::string end1;
  std::string end2;
  int hops = 4;
  int idx = 1;
  std::string prefix = "LCO";
  std::vector<LengthRange> len_ranges = defaults::horseshoe_lengths();
  ColorMap colors = default_colors();
  double loc_local = 0.0;  // y coordinate of the line

  void validate() const {
    require(!end1.empty() && !end2.empty(), ErrorCode::kInvalidParams, "end nodes are required");
    require(end1 != end2, ErrorCode::kInvalidParams, "horseshoe ends must differ");
    require(hops >= 2, ErrorCode::kInvalidParams, "a horseshoe needs at least 2 hops");
    require(!len_ranges.empty(), ErrorCode::kInvalidParams, "no length ranges");
    std::vector<double> w;
    for (std::size_t i = 0; i < len_ranges.size(); ++i) {
      const LengthRange& r = len_ranges[i];
      require(r.low > 0.0 && r.low <= r.high, ErrorCode::kInvalidParams,
              "length ranges must satisfy 0 < low <= high");
      if (i > 0) {
        require(r.low >= len_ranges[i - 1].high, ErrorCode::kInvalidParams,
                "length ranges must be sorted and non-overlapping");
      }
      w.push_back(r.probability);
    }
    require(weights_sum_to_one(w, 1e-6), ErrorCode::kInvalidParams,
            "length range probabilities must sum to 1");
  }
};

// Draws a node count N from the table and returns N - 1 hub-to-hub hops.
inline int sample_hops(const OccurrenceTable& occurrence, Rng& rng) {
  occurrence.validate();
  for (auto [n, p] : occurrence.entries) {
    require(n >= 3 || p == 0.0, ErrorCode::kInvalidParams,
            "a horseshoe has at least 3 nodes");
  }
  return occurrence.sample(rng) - 1;
}

struct Horseshoe {
  Topology topology;
  double total_km = 0.0;
  std::vector<std::string> path;  // end1 ... end2
};

inline Horseshoe generate_horseshoe(const HorseshoeSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<double> weights;
  for (const LengthRange& r : spec.len_ranges) weights.push_back(r.probability);
  const LengthRange& range = spec.len_ranges[sample_index(weights, rng)];
  const double total = range.low == range.high ? range.low : uniform(rng, range.low, range.high);

  std::vector<double> cuts;
  for (;;) {
    cuts.clear();
    for (int k = 1; k < spec.hops; ++k) cuts.push_back(uniform_open(rng, 0.0, total));
    std::sort(cuts.begin(), cuts.end());
    if (std::adjacent_find(cuts.begin(), cuts.end()) == cuts.end()) break;
  }

  Horseshoe out;
  out.total_km = total;
  Topology& topo = out.topology;
  topo.set_segment(Segment::kMetroAggregation);
  auto add = [&](std::string name, NodeType type, double x) {
    Node node;
    node.name = std::move(name);
    node.type = type;
    node.color = color_for(type, spec.colors);
    node.segment = Segment::kMetroAggregation;
    node.pos = Point{x, spec.loc_local};
    out.path.push_back(node.name);
    topo.add_node(std::move(node));
  };
  add(spec.end1, NodeType::kRegional, 0.0);
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    add(spec.prefix + std::to_string(spec.idx + static_cast<int>(k)), NodeType::kLocal, cuts[k]);
  }
  add(spec.end2, NodeType::kRegional, total);

  double prev = 0.0;
  for (std::size_t k = 0; k + 1 < out.path.size(); ++k) {
    const double next = k < cuts.size() ? cuts[k] : total;
    topo.add_link(out.path[k], out.path[k + 1], next - prev);
    prev = next;
  }
  assign_reference_nodes(topo, spec.end1, spec.end2);
  return out;
}

struct Moments {
  double min = 0.0;
  double max = 0.0;
  double avg = 0.0;
  double std = 0.0;
};

inline Moments moments(std::span<const double> xs) {
  require(!xs.empty(), ErrorCode::kInvalidParams, "no samples");
  Moments m;
  m.min = *std::min_element(xs.begin(), xs.end());
  m.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.avg = sum / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m.avg) * (x - m.avg);
  m.std = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

struct HorseshoeStats {
  Moments hops;
  Moments link_km;
  Moments total_km;
};

inline HorseshoeStats horseshoe_stats(std::span<const Horseshoe> shoes) {
  std::vector<double> hops, links, totals;
  for (const Horseshoe& h : shoes) {
    hops.push_back(static_cast<double>(h.topology.link_count()));
    double total = 0.0;
    for (const Link& l : h.topology.links()) {
      links.push_back(l.length_km);
      total += l.length_km;
    }
    totals.push_back(total);
  }
  return HorseshoeStats{moments(hops), moments(links), moments(totals)};
}

}  // namespace topogen
