#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "topogen/metro_agg.hpp"
#include "test_support.hpp"

namespace topogen {
namespace {

using test::expect_error;

HorseshoeSpec spec(int hops, std::vector<LengthRange> ranges = defaults::horseshoe_lengths()) {
  HorseshoeSpec s;
  s.end1 = "RCO1";
  s.end2 = "RCO2";
  s.hops = hops;
  s.len_ranges = std::move(ranges);
  return s;
}

TEST(Hops, Sampling) {
  Rng rng(1);
  EXPECT_EQ(sample_hops(OccurrenceTable{{{3, 1.0}}}, rng), 2);
  expect_error([&] { sample_hops(OccurrenceTable{{{2, 1.0}}}, rng); }, ErrorCode::kInvalidParams);
  // Expected node count of the default table is 5.47, so 4.47 hops.
  EXPECT_NEAR(defaults::horseshoe_nodes().mean() - 1.0, 4.47, 1e-12);
}

TEST(Horseshoe, TwoHopsConserveLength) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    const Horseshoe h = generate_horseshoe(spec(2, {{10, 10, 1.0}}), rng);
    ASSERT_EQ(h.path.size(), 3u);
    const double u = h.topology.link(h.path[0], h.path[1]).length_km;
    const double v = h.topology.link(h.path[1], h.path[2]).length_km;
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 10.0);
    EXPECT_NEAR(v, 10.0 - u, 1e-12);
    EXPECT_NEAR(u + v, 10.0, 1e-9);
    EXPECT_EQ(h.total_km, 10.0);
  }
}

TEST(Horseshoe, FourHopSequence) {
  Rng rng(3);
  const Horseshoe h = generate_horseshoe(spec(4), rng);
  ASSERT_EQ(h.path.size(), 5u);
  EXPECT_EQ(h.topology.link_count(), 4u);
  const std::vector<NodeType> expect{NodeType::kRegional, NodeType::kLocal, NodeType::kLocal,
                                     NodeType::kLocal, NodeType::kRegional};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(h.topology.node(h.path[i]).type, expect[i]);
  EXPECT_EQ(h.path[1], "LCO1");
  EXPECT_EQ(h.path[3], "LCO3");
  double prev = -1.0;
  for (const auto& name : h.path) {
    const double x = h.topology.node(name).pos.x;
    EXPECT_GT(x, prev);
    prev = x;
  }
}

TEST(Horseshoe, InteriorReferenceNode) {
  Topology t = test::make_topology({"E1", "L", "E2"}, {});
  t.add_link("E1", "L", 2.0);
  t.add_link("L", "E2", 8.0);
  assign_reference_nodes(t, "E1", "E2");
  EXPECT_EQ(t.node("L").reference_node, "E1");
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const Horseshoe h = generate_horseshoe(spec(5), rng);
    for (std::size_t i = 1; i + 1 < h.path.size(); ++i) {
      const double x = h.topology.node(h.path[i]).pos.x;
      EXPECT_EQ(h.topology.node(h.path[i]).reference_node, x <= h.total_km - x ? "RCO1" : "RCO2");
    }
  }
}

TEST(Horseshoe, PropertiesOverManyDraws) {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const int hops = 2 + static_cast<int>(uniform_index(rng, 8));
    auto s = spec(hops);
    s.idx = 10;
    const Horseshoe h = generate_horseshoe(s, rng);
    EXPECT_EQ(h.topology.node_count(), static_cast<std::size_t>(hops + 1));
    int regional = 0;
    double sum = 0.0;
    for (const Node& n : h.topology.nodes()) regional += n.type == NodeType::kRegional;
    for (const Link& l : h.topology.links()) {
      EXPECT_GT(l.length_km, 0.0);
      sum += l.length_km;
    }
    EXPECT_EQ(regional, 2);
    EXPECT_NEAR(sum, h.total_km, 1e-9);
    EXPECT_GE(h.total_km, 15.0);
    EXPECT_LE(h.total_km, 302.0);
  }
}

TEST(Horseshoe, Errors) {
  Rng rng(1);
  auto same = spec(4);
  same.end2 = same.end1;
  expect_error([&] { generate_horseshoe(same, rng); }, ErrorCode::kInvalidParams);
  expect_error([&] { generate_horseshoe(spec(1), rng); }, ErrorCode::kInvalidParams);
  expect_error([&] { generate_horseshoe(spec(3, {{10, 20, 0.5}, {20, 30, 0.4}}), rng); },
               ErrorCode::kInvalidParams);
  expect_error([&] { generate_horseshoe(spec(3, {{10, 20, 0.5}, {15, 30, 0.5}}), rng); },
               ErrorCode::kInvalidParams);
}

TEST(Horseshoe, CustomColors) {
  auto s = spec(3);
  s.colors[NodeType::kLocal] = "orange";
  Rng rng(1);
  const Horseshoe h = generate_horseshoe(s, rng);
  EXPECT_EQ(h.topology.node("LCO1").color, "orange");
  EXPECT_EQ(h.topology.node("RCO1").color, "blue");
}

TEST(Moments, Basic) {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const Moments m = moments(xs);
  EXPECT_DOUBLE_EQ(m.min, 1.0);
  EXPECT_DOUBLE_EQ(m.max, 4.0);
  EXPECT_DOUBLE_EQ(m.avg, 2.5);
  EXPECT_NEAR(m.std, std::sqrt(1.25), 1e-12);
}

}  // namespace
}  // namespace topogen
