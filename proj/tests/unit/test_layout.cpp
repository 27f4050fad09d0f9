#include <cmath>

#include <gtest/gtest.h>

#include "topogen/layout.hpp"
#include "test_support.hpp"

namespace topogen {
namespace {

using test::expect_error;
using test::make_topology;

constexpr LayoutStrategy kAll[] = {LayoutStrategy::kSpring, LayoutStrategy::kKamadaKawai,
                                   LayoutStrategy::kSpectral};

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

TEST(Layout, SingleEdgeGivesDistinctFinitePoints) {
  const Topology t = make_topology({"A", "B"}, {{"A", "B"}});
  for (LayoutStrategy s : kAll) {
    Rng rng(1);
    const LayoutResult r = compute_layout(t, s, rng);
    const Point a = r.positions.at("A"), b = r.positions.at("B");
    EXPECT_TRUE(std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(b.x) && std::isfinite(b.y));
    EXPECT_GT(dist(a, b), 0.0) << to_string(s);
  }
}

TEST(Layout, KamadaKawaiSeparatesOppositeCorners) {
  const Topology c4 = make_topology({"A", "B", "C", "D"},
                                    {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "A"}});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto p = compute_layout(c4, LayoutStrategy::kKamadaKawai, rng).positions;
    const double adjacent = std::max({dist(p.at("A"), p.at("B")), dist(p.at("B"), p.at("C")),
                                      dist(p.at("C"), p.at("D")), dist(p.at("D"), p.at("A"))});
    const double opposite = std::min(dist(p.at("A"), p.at("C")), dist(p.at("B"), p.at("D")));
    EXPECT_GT(opposite, adjacent) << "seed " << seed;
  }
}

TEST(Layout, NormalizedToUnitBox) {
  const Topology t = make_topology({"A", "B", "C", "D", "E"},
                                   {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}, {"E", "A"}});
  for (LayoutStrategy s : kAll) {
    Rng rng(3);
    double extent = 0.0;
    for (const auto& [name, p] : compute_layout(t, s, rng).positions) {
      extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
    }
    EXPECT_NEAR(extent, 1.0, 1e-9) << to_string(s);
  }
}

TEST(Layout, SeededAndSpectralSeedFree) {
  const Topology t = make_topology({"A", "B", "C", "D", "E"},
                                   {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}, {"A", "C"}});
  for (LayoutStrategy s : kAll) {
    Rng r1(5), r2(5);
    EXPECT_EQ(compute_layout(t, s, r1).positions, compute_layout(t, s, r2).positions);
  }
  Rng r1(5), r2(6);
  EXPECT_EQ(compute_layout(t, LayoutStrategy::kSpectral, r1).positions,
            compute_layout(t, LayoutStrategy::kSpectral, r2).positions);
}

TEST(Layout, SymmetricNodesDoNotCoincideOnLinks) {
  // Spectral puts structurally equal nodes of K4 together.
  const Topology k4 = make_topology({"A", "B", "C", "D"}, {{"A", "B"}, {"A", "C"}, {"A", "D"},
                                                         {"B", "C"}, {"B", "D"}, {"C", "D"}});
  Rng rng(1);
  const auto p = compute_layout(k4, LayoutStrategy::kSpectral, rng).positions;
  for (const Link& l : k4.links()) EXPECT_GT(dist(p.at(l.a), p.at(l.b)), 0.0);
}

TEST(Layout, StrategyNames) {
  EXPECT_EQ(layout_from_string("spring"), LayoutStrategy::kSpring);
  EXPECT_EQ(layout_from_string("kamada-kawai"), LayoutStrategy::kKamadaKawai);
  EXPECT_EQ(layout_from_string("spectral"), LayoutStrategy::kSpectral);
  expect_error([] { layout_from_string("circular"); }, ErrorCode::kUnknownStrategy);
}

DistanceRanges up_to_600() { return DistanceRanges{{{0, 300}, {300, 600}}, {}}; }

TEST(Scaling, OneLinkStretchesToTheMaximum) {
  const Topology t = make_topology({"A", "B"}, {{"A", "B"}});
  LayoutResult pos{{{"A", {0.0, 0.0}}, {"B", {1.0, 0.0}}}};
  const Topology s = scale_to_ranges(t, pos, up_to_600(), false);
  EXPECT_DOUBLE_EQ(s.link("A", "B").length_km, 600.0);
}

TEST(Scaling, LinearInLayoutLength) {
  const Topology t = make_topology({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  LayoutResult pos{{{"A", {0.0, 0.0}}, {"B", {1.0, 0.0}}, {"C", {1.0, 2.0}}}};
  const Topology s = scale_to_ranges(t, pos, up_to_600(), false);
  EXPECT_DOUBLE_EQ(s.link("A", "B").length_km, 300.0);
  EXPECT_DOUBLE_EQ(s.link("B", "C").length_km, 600.0);
  EXPECT_EQ(s.node("C").pos, (Point{1.0, 2.0}));
}

TEST(Scaling, PreservesRatiosWithFit) {
  Rng rng(8);
  std::vector<double> lens;
  for (int i = 0; i < 40; ++i) lens.push_back(uniform(rng, 0.05, 1.0));
  const DistanceRanges ranges = defaults::backbone_ranges();
  for (bool fit : {false, true}) {
    const double f = scale_factor(lens, ranges, fit);
    std::vector<double> km;
    for (double l : lens) km.push_back(l * f);
    for (std::size_t i = 1; i < lens.size(); ++i) {
      EXPECT_NEAR(km[i] / km[0], lens[i] / lens[0], 1e-12);
    }
    if (!fit) {
      for (double k : km) EXPECT_LE(k, ranges.max_length() + 1e-9);
    }
  }
}

TEST(Scaling, FitPicksTheBestGridFactor) {
  Rng rng(2);
  const DistanceRanges ranges = defaults::backbone_ranges();
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> lens;
    for (int i = 0; i < 60; ++i) lens.push_back(uniform(rng, 0.01, 1.0) * uniform(rng, 0.1, 1.0));
    auto err = [&](double f) {
      std::vector<double> km;
      for (double l : lens) km.push_back(l * f);
      return mape(ranges.target, distance_histogram(km, ranges).proportions);
    };
    // Oracle: scan the 64 geometric factors over [0.25, 4] x base.
    const double base = scale_factor(lens, ranges, false);
    double best = 1e9;
    for (int k = 0; k < 64; ++k) best = std::min(best, err(base * 0.25 * std::pow(16.0, k / 63.0)));
    EXPECT_NEAR(err(scale_factor(lens, ranges, true)), best, 1e-12);
  }
}

TEST(Scaling, Errors) {
  const Topology t = make_topology({"A", "B"}, {{"A", "B"}});
  LayoutResult same{{{"A", {0.5, 0.5}}, {"B", {0.5, 0.5}}}};
  expect_error([&] { scale_to_ranges(t, same, up_to_600(), false); }, ErrorCode::kNonPositiveLength);
  LayoutResult missing{{{"A", {0.5, 0.5}}}};
  expect_error([&] { scale_to_ranges(t, missing, up_to_600(), false); }, ErrorCode::kInvalidParams);
  LayoutResult ok{{{"A", {0.0, 0.0}}, {"B", {1.0, 0.0}}}};
  expect_error([&] { scale_to_ranges(t, ok, up_to_600(), true); }, ErrorCode::kInvalidParams);
}

}  // namespace
}  // namespace topogen
