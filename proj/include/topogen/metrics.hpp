// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "topogen/distributions.hpp"
#include "topogen/error.hpp"
#include "topogen/model.hpp"
#include "topogen/random.hpp"

namespace topogen {

// Link length bins in km; `target` holds the expected share of links per bin.
struct DistanceRanges {
  std::vector<std::pair<double, double>> bins;
  std::vector<double> target;

  void validate() const {
    require(!bins.empty(), ErrorCode::kInvalidParams, "distance ranges are empty");
    for (std::size_t i = 0; i < bins.size(); ++i) {
      require(bins[i].first >= 0.0 && bins[i].first < bins[i].second,
              ErrorCode::kInvalidParams, "distance bin must satisfy 0 <= low < high");
      if (i > 0) {
        require(std::abs(bins[i].first - bins[i - 1].second) < 1e-9,
                ErrorCode::kInvalidParams, "distance bins must be contiguous");
      }
    }
    if (!target.empty()) {
      require(target.size() == bins.size(), ErrorCode::kInvalidParams,
              "distance target has the wrong number of bins");
      require(weights_sum_to_one(target, 1e-6), ErrorCode::kInvalidParams,
              "distance target must sum to 1");
    }
  }

  double max_length() const { return bins.back().second; }

  // Bin index holding `km`; the last bin is closed on the right.
  std::optional<std::size_t> bin_of(double km) const {
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const bool last = i + 1 == bins.size();
      if (km >= bins[i].first && (km < bins[i].second || (last && km <= bins[i].second))) {
        return i;
      }
    }
    return std::nullopt;
  }

  bool operator==(const DistanceRanges&) const = default;
};

namespace defaults {

// The published shares add up to 100.1%; they are renormalized to sum to 1.
inline DistanceRanges backbone_ranges() {
  DistanceRanges r{{{0, 50}, {50, 100}, {100, 200}, {200, 400}, {400, 600}},
                   {0.155, 0.169, 0.338, 0.254, 0.085}};
  double sum = 0.0;
  for (double t : r.target) sum += t;
  for (double& t : r.target) t /= sum;
  return r;
}

inline DistanceRanges metro_ranges() {
  return {{{0, 10}, {10, 40}, {40, 80}, {80, 120}}, {0.39, 0.37, 0.21, 0.03}};
}

}  // namespace defaults

// Mean over bins with a positive target of |achieved - target| / target.
inline double mape(std::span<const double> target, std::span<const double> achieved) {
  if (target.size() != achieved.size()) {
    throw Error(ErrorCode::kMismatchedBins, "histograms have different bin counts");
  }
  double sum = 0.0;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] <= 0.0) continue;
    sum += std::abs(achieved[i] - target[i]) / target[i];
    ++bins;
  }
  require(bins > 0, ErrorCode::kMismatchedBins, "target has no positive bins");
  return sum / static_cast<double>(bins);
}

// Keyed variant: compares on the target support; keys missing from
// `achieved` count as zero. Fully disjoint key sets are rejected.
inline double mape(const std::map<int, double>& target,
                   const std::map<int, double>& achieved) {
  bool overlap = false;
  for (const auto& [k, v] : target) overlap = overlap || achieved.contains(k);
  if (!overlap && !achieved.empty()) {
    throw Error(ErrorCode::kMismatchedBins, "target and achieved keys are disjoint");
  }
  std::vector<double> t, a;
  for (const auto& [k, v] : target) {
    t.push_back(v);
    auto it = achieved.find(k);
    a.push_back(it == achieved.end() ? 0.0 : it->second);
  }
  return mape(t, a);
}

// Achieved mass on keys where the target is absent or zero.
inline double other_mass(const std::map<int, double>& target,
                         const std::map<int, double>& achieved) {
  double m = 0.0;
  for (const auto& [k, v] : achieved) {
    auto it = target.find(k);
    if (it == target.end() || it->second <= 0.0) m += v;
  }
  return m;
}

struct DistanceHistogram {
  std::vector<double> proportions;  // per bin
  double out_of_range = 0.0;        // share of links in no bin
};

inline DistanceHistogram distance_histogram(std::span<const double> lengths_km,
                                            const DistanceRanges& ranges) {
  DistanceHistogram h;
  h.proportions.assign(ranges.bins.size(), 0.0);
  if (lengths_km.empty()) return h;
  const double share = 1.0 / static_cast<double>(lengths_km.size());
  for (double km : lengths_km) {
    if (auto bin = ranges.bin_of(km)) {
      h.proportions[*bin] += share;
    } else {
      h.out_of_range += share;
    }
  }
  return h;
}

inline DistanceHistogram distance_histogram(const Topology& topo,
                                            const DistanceRanges& ranges) {
  std::vector<double> lengths;
  lengths.reserve(topo.link_count());
  for (const Link& l : topo.links()) lengths.push_back(l.length_km);
  return distance_histogram(lengths, ranges);
}

struct ValidationReport {
  std::map<int, double> degree_target;
  std::map<int, double> degree_achieved;
  double degree_mape = 0.0;
  double other_mass = 0.0;
  std::vector<std::pair<double, double>> distance_bins;
  std::vector<double> distance_target;
  std::vector<double> distance_achieved;
  std::optional<double> distance_mape;
  double distance_out_of_range = 0.0;

  bool operator==(const ValidationReport&) const = default;
};

inline ValidationReport validate_topology(const Topology& topo,
                                          const std::optional<DegreeDistribution>& degrees,
                                          const std::optional<DistanceRanges>& ranges) {
  ValidationReport r;
  r.degree_achieved = degree_histogram(topo);
  if (degrees) {
    r.degree_target = degrees->as_map();
    r.degree_mape = mape(r.degree_target, r.degree_achieved);
    r.other_mass = other_mass(r.degree_target, r.degree_achieved);
  }
  if (ranges) {
    const DistanceHistogram h = distance_histogram(topo, *ranges);
    r.distance_bins = ranges->bins;
    r.distance_target = ranges->target;
    r.distance_achieved = h.proportions;
    r.distance_out_of_range = h.out_of_range;
    if (!ranges->target.empty()) r.distance_mape = mape(ranges->target, h.proportions);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Best-of-N campaigns.

enum class Metric { kDegree, kDistance };

inline Metric metric_from_string(std::string_view s) {
  if (s == "degree") return Metric::kDegree;
  if (s == "distance") return Metric::kDistance;
  throw Error(ErrorCode::kInvalidParams, "unknown metric '" + std::string(s) + "'");
}

inline std::vector<std::uint64_t> derive_seeds(std::uint64_t base, std::size_t n) {
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t i = 0; i < n; ++i) seeds[i] = mix_seed(base, i);
  return seeds;
}

struct CampaignResult {
  Topology best;
  ValidationReport best_report;
  std::size_t best_index = 0;
  double best_score = 0.0;
  double average_score = 0.0;
  std::vector<double> scores;  // NaN for failed iterations
  std::size_t failures = 0;
};

inline double score_of(const ValidationReport& r, Metric metric) {
  if (metric == Metric::kDegree) return r.degree_mape;
  require(r.distance_mape.has_value(), ErrorCode::kInvalidParams,
          "distance metric needs distance ranges with targets");
  return *r.distance_mape;
}

// Runs `generate(seed)` once per seed and keeps the topology with the lowest
// score. Ties go to the lowest iteration index, so the result does not depend
// on how iterations are spread over threads.
template <typename Generator>
CampaignResult best_of_n(Generator&& generate, std::span<const std::uint64_t> seeds,
                         Metric metric, const std::optional<DegreeDistribution>& degrees,
                         const std::optional<DistanceRanges>& ranges,
                         unsigned threads = 0) {
  const std::size_t n = seeds.size();
  require(n >= 1, ErrorCode::kInvalidParams, "best_of_n needs at least one iteration");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::vector<double> scores(n, std::numeric_limits<double>::quiet_NaN());
  struct Best {
    std::optional<Topology> topo;
    ValidationReport report;
    std::size_t index = 0;
    double score = std::numeric_limits<double>::infinity();
  };
  std::vector<Best> per_worker(threads);
  std::string first_error;
  std::mutex error_mutex;

  auto work = [&](unsigned w) {
    Best& best = per_worker[w];
    for (std::size_t i = w; i < n; i += threads) {
      try {
        Topology topo = generate(seeds[i]);
        ValidationReport report = validate_topology(topo, degrees, ranges);
        const double s = score_of(report, metric);
        scores[i] = s;
        if (s < best.score) {
          best = Best{std::move(topo), std::move(report), i, s};
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kGenerationFailed) throw;
        std::lock_guard lock(error_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  CampaignResult result;
  const Best* winner = nullptr;
  for (const Best& b : per_worker) {
    if (!b.topo) continue;
    if (!winner || b.score < winner->score ||
        (b.score == winner->score && b.index < winner->index)) {
      winner = &b;
    }
  }
  if (!winner) {
    throw Error(ErrorCode::kGenerationFailed,
                "all " + std::to_string(n) + " iterations failed: " + first_error);
  }
  double sum = 0.0;
  std::size_t ok = 0;
  for (double s : scores) {
    if (std::isnan(s)) continue;
    sum += s;
    ++ok;
  }
  result.best = *winner->topo;
  result.best_report = winner->report;
  result.best_index = winner->index;
  result.best_score = winner->score;
  result.average_score = sum / static_cast<double>(ok);
  result.scores = std::move(scores);
  result.failures = n - ok;
  return result;
}

}  // namespace topogen
