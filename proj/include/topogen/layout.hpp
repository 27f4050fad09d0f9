// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Node placement strategies and conversion of layout units to kilometers.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "topogen/error.hpp"
#include "topogen/graph.hpp"
#include "topogen/metrics.hpp"
#include "topogen/model.hpp"
#include "topogen/random.hpp"

namespace topogen {

enum class LayoutStrategy { kSpring, kKamadaKawai, kSpectral };

inline std::string_view to_string(LayoutStrategy s) {
  switch (s) {
    case LayoutStrategy::kSpring: return "spring";
    case LayoutStrategy::kKamadaKawai: return "kamada-kawai";
    case LayoutStrategy::kSpectral: return "spectral";
  }
  return "?";
}

inline LayoutStrategy layout_from_string(std::string_view s) {
  if (s == "spring") return LayoutStrategy::kSpring;
  if (s == "kamada-kawai" || s == "kamada") return LayoutStrategy::kKamadaKawai;
  if (s == "spectral") return LayoutStrategy::kSpectral;
  throw Error(ErrorCode::kUnknownStrategy, "unknown layout '" + std::string(s) + "'");
}

struct LayoutResult {
  std::map<std::string, Point> positions;
};

namespace layout {

inline constexpr int kSpringIterations = 200;
inline constexpr int kStressSweeps = 300;

// Centers on the mean and scales so the largest |coordinate| is 1.
inline void normalize(std::vector<Point>& pos) {
  if (pos.empty()) return;
  double mx = 0.0, my = 0.0;
  for (const Point& p : pos) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(pos.size());
  my /= static_cast<double>(pos.size());
  double extent = 0.0;
  for (Point& p : pos) {
    p.x -= mx;
    p.y -= my;
    extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  }
  if (extent <= 0.0) return;
  for (Point& p : pos) {
    p.x /= extent;
    p.y /= extent;
  }
}

// Symmetric vertices can land on the same point (spectral embeddings of
// structurally equivalent nodes). Linked pairs that coincide are nudged
// apart so every link keeps a positive length. The nudge uses its own fixed
// stream so seed-free layouts stay seed-free.
inline void separate_coincident(const graph::Graph& g, std::vector<Point>& pos) {
  constexpr double kEps = 1e-9;
  constexpr double kNudge = 1e-3;
  Rng rng(0x9e3779b97f4a7c15ULL);
  bool moved = false;
  for (int round = 0; round < 8; ++round) {
    bool clash = false;
    for (auto [a, b] : g.edges()) {
      if (std::abs(pos[a].x - pos[b].x) < kEps && std::abs(pos[a].y - pos[b].y) < kEps) {
        pos[b].x += uniform(rng, -kNudge, kNudge);
        pos[b].y += uniform(rng, -kNudge, kNudge);
        clash = moved = true;
      }
    }
    if (!clash) break;
  }
  if (moved) normalize(pos);
}

inline std::vector<Point> random_positions(int n, Rng& rng) {
  std::vector<Point> pos(static_cast<std::size_t>(n));
  for (Point& p : pos) {
    p.x = uniform01(rng);
    p.y = uniform01(rng);
  }
  return pos;
}

// Fruchterman-Reingold with linear cooling.
inline std::vector<Point> spring(const graph::Graph& g, Rng& rng,
                                 int iterations = kSpringIterations) {
  const int n = g.size();
  std::vector<Point> pos = random_positions(n, rng);
  if (n <= 1) return pos;
  const double k = 1.0 / std::sqrt(static_cast<double>(n));
  double temperature = 0.1;
  const double cooling = temperature / (iterations + 1);
  std::vector<char> adjacent(static_cast<std::size_t>(n) * n, 0);
  for (auto [a, b] : g.edges()) {
    adjacent[static_cast<std::size_t>(a) * n + b] = 1;
    adjacent[static_cast<std::size_t>(b) * n + a] = 1;
  }
  std::vector<Point> disp(static_cast<std::size_t>(n));
  for (int it = 0; it < iterations; ++it) {
    for (int v = 0; v < n; ++v) {
      Point d{0.0, 0.0};
      const char* row = &adjacent[static_cast<std::size_t>(v) * n];
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        const double dx = pos[v].x - pos[u].x;
        const double dy = pos[v].y - pos[u].y;
        const double dist = std::max(std::sqrt(dx * dx + dy * dy), 0.01);
        double f = k * k / (dist * dist);
        if (row[u]) f -= dist / k;
        d.x += dx * f;
        d.y += dy * f;
      }
      disp[v] = d;
    }
    for (int v = 0; v < n; ++v) {
      const double len = std::max(std::sqrt(disp[v].x * disp[v].x + disp[v].y * disp[v].y), 0.01);
      const double step = std::min(len, temperature) / len;
      pos[v].x += disp[v].x * step;
      pos[v].y += disp[v].y * step;
    }
    temperature -= cooling;
  }
  return pos;
}

// Classical MDS of a distance matrix: top two eigenvectors of the doubly
// centered squared distances.
inline std::vector<Point> classical_mds(const std::vector<std::vector<int>>& d) {
  const int n = static_cast<int>(d.size());
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b(i, j) = -0.5 * d[i][j] * d[i][j];
  }
  const Eigen::VectorXd row_mean = b.rowwise().mean();
  const double all_mean = row_mean.mean();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b(i, j) += all_mean - row_mean(i) - row_mean(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  std::vector<Point> pos(static_cast<std::size_t>(n));
  for (int k = 0; k < 2 && k < n; ++k) {
    const int c = n - 1 - k;
    const double scale = std::sqrt(std::max(solver.eigenvalues()(c), 0.0));
    for (int i = 0; i < n; ++i) {
      (k == 0 ? pos[i].x : pos[i].y) = solver.eigenvectors()(i, c) * scale;
    }
  }
  return pos;
}

// Stress majorization against hop distances, weights d^-2. Starts from
// classical MDS with a small seeded jitter.
inline std::vector<Point> kamada_kawai(const graph::Graph& g, Rng& rng,
                                       int sweeps = kStressSweeps) {
  const int n = g.size();
  if (n <= 1) return random_positions(n, rng);
  std::vector<std::vector<int>> hops(static_cast<std::size_t>(n));
  int diameter = 1;
  for (int v = 0; v < n; ++v) {
    hops[v] = graph::bfs_hops(g, v);
    for (int d : hops[v]) diameter = std::max(diameter, d);
  }
  for (auto& row : hops) {
    for (int& d : row) {
      if (d < 0) d = diameter + 1;
    }
  }
  std::vector<Point> pos = classical_mds(hops);
  for (Point& p : pos) {
    p.x += uniform(rng, -0.05, 0.05);
    p.y += uniform(rng, -0.05, 0.05);
  }
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      double sx = 0.0, sy = 0.0, sw = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dij = hops[i][j];
        const double w = 1.0 / (dij * dij);
        const double dx = pos[i].x - pos[j].x;
        const double dy = pos[i].y - pos[j].y;
        const double cur = std::max(std::sqrt(dx * dx + dy * dy), 1e-9);
        sx += w * (pos[j].x + dij * dx / cur);
        sy += w * (pos[j].y + dij * dy / cur);
        sw += w;
      }
      const Point next{sx / sw, sy / sw};
      moved = std::max(moved, std::hypot(next.x - pos[i].x, next.y - pos[i].y));
      pos[i] = next;
    }
    if (moved < 1e-5) break;
  }
  return pos;
}

// Eigenvectors of the Laplacian for the two smallest nonzero eigenvalues.
inline std::vector<Point> spectral(const graph::Graph& g) {
  const int n = g.size();
  std::vector<Point> pos(static_cast<std::size_t>(n));
  if (n <= 1) return pos;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (auto [a, b] : g.edges()) {
    lap(a, b) -= 1.0;
    lap(b, a) -= 1.0;
    lap(a, a) += 1.0;
    lap(b, b) += 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  auto column = [&](int c) {
    Eigen::VectorXd v = vecs.col(c);
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    return v;
  };
  const Eigen::VectorXd x = column(1);
  const Eigen::VectorXd y = n > 2 ? column(2) : Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) pos[i] = Point{x(i), y(i)};
  return pos;
}

}  // namespace layout

// Normalized positions (centered, max |coordinate| = 1) in vertex order.
inline std::vector<Point> layout_positions(const graph::Graph& g, LayoutStrategy strategy,
                                           Rng& rng) {
  std::vector<Point> pos;
  switch (strategy) {
    case LayoutStrategy::kSpring: pos = layout::spring(g, rng); break;
    case LayoutStrategy::kKamadaKawai: pos = layout::kamada_kawai(g, rng); break;
    case LayoutStrategy::kSpectral: pos = layout::spectral(g); break;
  }
  layout::normalize(pos);
  layout::separate_coincident(g, pos);
  return pos;
}

inline LayoutResult compute_layout(const Topology& topo, LayoutStrategy strategy, Rng& rng) {
  const std::vector<Point> pos = layout_positions(topo.to_graph(), strategy, rng);
  LayoutResult out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    out.positions.emplace(topo.nodes()[i].name, pos[i]);
  }
  return out;
}

inline constexpr int kDefaultFitIterations = 64;

// Factor mapping layout units to km. Without fitting, the longest link is
// stretched to the upper bound of the last range. With fitting, `iterations`
// factors spaced geometrically over [0.25, 4] x that base are tried and the
// one with the lowest distance-range MAPE wins (ties to the smaller factor).
inline double scale_factor(std::span<const double> layout_lengths, const DistanceRanges& ranges,
                           bool fit, int iterations = kDefaultFitIterations) {
  ranges.validate();
  require(!layout_lengths.empty(), ErrorCode::kInvalidParams, "no links to scale");
  double longest = 0.0;
  for (double len : layout_lengths) {
    require(len > 0.0, ErrorCode::kNonPositiveLength, "zero-length link in layout");
    longest = std::max(longest, len);
  }
  const double base = ranges.max_length() / longest;
  if (!fit) return base;
  require(!ranges.target.empty(), ErrorCode::kInvalidParams,
          "fitting the scale factor needs target proportions");
  require(iterations >= 1, ErrorCode::kInvalidParams, "fit needs at least one evaluation");
  if (iterations == 1) return base;
  double best_factor = base;
  double best_error = std::numeric_limits<double>::infinity();
  std::vector<double> scaled(layout_lengths.size());
  for (int k = 0; k < iterations; ++k) {
    const double factor =
        base * 0.25 * std::pow(16.0, static_cast<double>(k) / (iterations - 1));
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = layout_lengths[i] * factor;
    const double err = mape(ranges.target, distance_histogram(scaled, ranges).proportions);
    if (err < best_error) {
      best_error = err;
      best_factor = factor;
    }
  }
  return best_factor;
}

// Applies `pos` to the nodes and sets every link length to its Euclidean
// layout length times the chosen factor.
inline Topology scale_to_ranges(const Topology& topo, const LayoutResult& pos,
                                const DistanceRanges& ranges, bool fit,
                                int iterations = kDefaultFitIterations) {
  Topology out = topo;
  for (const Node& n : topo.nodes()) {
    auto it = pos.positions.find(n.name);
    require(it != pos.positions.end(), ErrorCode::kInvalidParams,
            "no position for node '" + n.name + "'");
    require(std::isfinite(it->second.x) && std::isfinite(it->second.y),
            ErrorCode::kInvalidParams, "non-finite position for '" + n.name + "'");
    out.node(n.name).pos = it->second;
  }
  std::vector<double> lengths;
  lengths.reserve(out.link_count());
  for (const Link& l : out.links()) {
    const Point& p = out.node(l.a).pos;
    const Point& q = out.node(l.b).pos;
    lengths.push_back(std::hypot(p.x - q.x, p.y - q.y));
  }
  const double factor = scale_factor(lengths, ranges, fit, iterations);
  std::vector<LinkKey> keys;
  for (const Link& l : out.links()) keys.emplace_back(l.a, l.b);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out.set_link_length(keys[i].first, keys[i].second, lengths[i] * factor);
  }
  return out;
}

}  // namespace topogen
