// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Statistical targets that drive generation: degree distributions, node type
// mixes and categorical occurrence tables, with the operator defaults.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "topogen/error.hpp"
#include "topogen/model.hpp"
#include "topogen/random.hpp"

namespace topogen {

inline constexpr double kProbabilityTolerance = 1e-9;

struct DegreeDistribution {
  std::vector<std::pair<int, double>> entries;

  void validate() const {
    require(!entries.empty(), ErrorCode::kInvalidParams, "empty degree distribution");
    std::vector<double> w;
    int prev = 0;
    for (auto [d, p] : entries) {
      require(d >= 1, ErrorCode::kInvalidParams, "degrees must be >= 1");
      require(d > prev, ErrorCode::kInvalidParams, "degrees must be strictly increasing");
      prev = d;
      w.push_back(p);
    }
    require(weights_sum_to_one(w, kProbabilityTolerance), ErrorCode::kInvalidParams,
            "degree probabilities must sum to 1");
  }

  int sample(Rng& rng) const { return sample_categorical(entries, rng); }

  std::map<int, double> as_map() const {
    return {entries.begin(), entries.end()};
  }

  double mean() const {
    double m = 0.0;
    for (auto [d, p] : entries) m += d * p;
    return m;
  }

  // Distribution for the halved network of the twin strategy:
  // each degree d becomes 2d - 2.
  DegreeDistribution twin_reduced() const {
    DegreeDistribution out;
    for (auto [d, p] : entries) {
      const int nd = 2 * d - 2;
      require(nd >= 1, ErrorCode::kInvalidParams,
              "degree " + std::to_string(d) + " maps to " + std::to_string(nd) +
                  " in the twin transform");
      out.entries.emplace_back(nd, p);
    }
    return out;
  }

  bool operator==(const DegreeDistribution&) const = default;
};

struct NodeTypeMix {
  std::vector<std::pair<NodeType, double>> entries;

  void validate() const {
    require(!entries.empty(), ErrorCode::kInvalidParams, "empty node type mix");
    std::vector<double> w;
    for (const auto& e : entries) w.push_back(e.second);
    require(weights_sum_to_one(w, kProbabilityTolerance), ErrorCode::kInvalidParams,
            "node type fractions must sum to 1");
  }

  double fraction(NodeType t) const {
    for (auto [type, f] : entries) {
      if (type == t) return f;
    }
    return 0.0;
  }

  // Same mix with `t` removed and the rest renormalized.
  NodeTypeMix without(NodeType t) const {
    NodeTypeMix out;
    double rest = 0.0;
    for (auto [type, f] : entries) {
      if (type != t) rest += f;
    }
    for (auto [type, f] : entries) {
      if (type != t && f > 0.0) out.entries.emplace_back(type, f / rest);
    }
    return out;
  }

  bool operator==(const NodeTypeMix&) const = default;
};

// Deterministic per-type counts: floor(f * n) each, remaining slots go to the
// largest fractional parts (ties to the earlier entry).
inline std::vector<std::pair<NodeType, int>> type_counts(const NodeTypeMix& mix, int n) {
  std::vector<std::pair<NodeType, int>> counts;
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < mix.entries.size(); ++i) {
    const double exact = mix.entries[i].second * n;
    const int base = static_cast<int>(std::floor(exact + 1e-9));
    counts.emplace_back(mix.entries[i].first, base);
    remainders.emplace_back(exact - base, i);
    assigned += base;
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; assigned < n && !remainders.empty(); ++k) {
    counts[remainders[k % remainders.size()].second].second += 1;
    ++assigned;
  }
  return counts;
}

// Shuffled list of n node types drawn without replacement from type_counts.
inline std::vector<NodeType> assign_types(const NodeTypeMix& mix, int n, Rng& rng) {
  std::vector<NodeType> types;
  types.reserve(static_cast<std::size_t>(n));
  for (auto [t, c] : type_counts(mix, n)) types.insert(types.end(), c, t);
  shuffle(types, rng);
  return types;
}

// "2:0.227,3:0.409" -> DegreeDistribution. Validation is left to the caller.
inline DegreeDistribution parse_degree_distribution(std::string_view text) {
  DegreeDistribution out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    std::size_t colon = item.find(':');
    require(colon != std::string_view::npos, ErrorCode::kInvalidParams,
            "expected degree:probability, got '" + std::string(item) + "'");
    int d = 0;
    auto ds = item.substr(0, colon);
    auto [p1, e1] = std::from_chars(ds.data(), ds.data() + ds.size(), d);
    require(e1 == std::errc() && p1 == ds.data() + ds.size(), ErrorCode::kInvalidParams,
            "bad degree '" + std::string(ds) + "'");
    double p = 0.0;
    try {
      p = std::stod(std::string(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidParams, "bad probability in '" + std::string(item) + "'");
    }
    out.entries.emplace_back(d, p);
    pos = end + 1;
  }
  return out;
}

// "national:0.7,regional:0.3" -> NodeTypeMix.
inline NodeTypeMix parse_type_mix(std::string_view text) {
  NodeTypeMix out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    std::size_t colon = item.rfind(':');
    require(colon != std::string_view::npos, ErrorCode::kInvalidParams,
            "expected type:fraction, got '" + std::string(item) + "'");
    double f = 0.0;
    try {
      f = std::stod(std::string(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidParams, "bad fraction in '" + std::string(item) + "'");
    }
    out.entries.emplace_back(node_type_from_string(item.substr(0, colon)), f);
    pos = end + 1;
  }
  return out;
}

// Categorical table over integer outcomes (ring counts, horseshoe sizes).
struct OccurrenceTable {
  std::vector<std::pair<int, double>> entries;

  void validate() const {
    require(!entries.empty(), ErrorCode::kInvalidParams, "empty occurrence table");
    std::vector<double> w;
    for (const auto& e : entries) w.push_back(e.second);
    require(weights_sum_to_one(w, 1e-6), ErrorCode::kInvalidParams,
            "occurrence probabilities must sum to 1");
  }

  int sample(Rng& rng) const { return sample_categorical(entries, rng); }

  double mean() const {
    double m = 0.0;
    for (auto [k, p] : entries) m += k * p;
    return m;
  }

  bool operator==(const OccurrenceTable&) const = default;
};

namespace defaults {

// Degree statistics of the reference national backbone (~50 nodes).
inline DegreeDistribution backbone_degrees() {
  return {{{2, 0.227}, {3, 0.409}, {4, 0.273}, {5, 0.091}}};
}

// Mostly national offices with some regional and pass-through sites.
inline NodeTypeMix backbone_types() {
  return {{{NodeType::kNational, 0.7}, {NodeType::kRegional, 0.2},
           {NodeType::kTransit, 0.1}}};
}

// Node type occurrence of the reference metro core mesh.
inline NodeTypeMix metro_types() {
  return {{{NodeType::kDataCenter, 0.01}, {NodeType::kNational, 0.05},
           {NodeType::kRegional, 0.70}, {NodeType::kRegionalNoHub, 0.24}}};
}

// Occurrence of N-ring metro core structures.
inline OccurrenceTable nring_occurrence() {
  return {{{1, 0.08}, {2, 0.53}, {3, 0.25}, {4, 0.10}, {6, 0.04}}};
}

// Occurrence of horseshoe node counts (both hubs included).
inline OccurrenceTable horseshoe_nodes() {
  return {{{3, 0.10}, {4, 0.19}, {5, 0.21}, {6, 0.27}, {7, 0.14}, {8, 0.05}, {9, 0.04}}};
}

}  // namespace defaults

}  // namespace topogen
