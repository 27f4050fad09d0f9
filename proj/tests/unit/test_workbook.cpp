#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "topogen/backbone.hpp"
#include "topogen/clustering.hpp"
#include "topogen/workbook.hpp"
#include "test_support.hpp"

namespace topogen {
namespace {

namespace fs = std::filesystem;
using test::expect_error;

class WorkbookTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("topogen_wb_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  static void spit(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
  }
  static std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
    return out;
  }

  fs::path dir_;
};

Workbook clustered_backbone() {
  BackboneParams p;
  p.seed = 3;
  Topology t = generate_mesh_backbone(p);
  ClusterParams cp;
  cp.epsilon = 0.25;
  t = apply_clusters(t, cluster_nodes(t, cp));
  Workbook wb{t, cluster_rows(t), {{"S1", "backbone", {{"strategy", "default"}, {"nodes", "50"}}}}, {}};
  wb.report.push_back(ReportRow{"degree", "2", 0.227, 0.24});
  wb.report.push_back(ReportRow{"degree", "other", std::nullopt, 0.0});
  return wb;
}

TEST_F(WorkbookTest, TriangleTables) {
  const Workbook wb{test::triangle(), {}, {}, {}};
  const auto tables = workbook_tables(wb);
  auto rows = [&](const std::string& name) { return csv::parse(tables.at(name)).size() - 1; };
  EXPECT_EQ(rows("nodes"), 3u);
  EXPECT_EQ(rows("links"), 3u);
  EXPECT_EQ(rows("clusters"), 0u);
  EXPECT_EQ(tables.at("links"),
            "source,target,length_km,segment\r\n"
            "A,B,10.000000,backbone\r\n"
            "A,C,10.000000,backbone\r\n"
            "B,C,10.000000,backbone\r\n");
}

TEST_F(WorkbookTest, CsvRoundTrip) {
  // Values representable at six decimals survive exactly.
  Workbook wb{test::triangle(), {{0, "A"}, {0, "B"}, {1, "C"}}, {{"S1", "mesh", {{"k", "v"}}}}, {}};
  wb.topology.node("A").cluster = 0;
  wb.topology.node("C").reference_node = "A";
  for (const char* n : {"A", "B", "C"}) wb.topology.node(n).color = color_for(NodeType::kNational);
  save_workbook(wb, dir_);
  EXPECT_EQ(load_workbook(dir_), wb);
}

TEST_F(WorkbookTest, CsvSaveLoadSaveIsByteIdentical) {
  const Workbook wb = clustered_backbone();
  save_workbook(wb, dir_ / "a");
  const Workbook loaded = load_workbook(dir_ / "a");
  save_workbook(loaded, dir_ / "b");
  EXPECT_EQ(snapshot(dir_ / "a"), snapshot(dir_ / "b"));
  EXPECT_EQ(loaded.topology.node_count(), wb.topology.node_count());
  EXPECT_EQ(loaded.structures, wb.structures);
  for (const Link& l : wb.topology.links()) {
    EXPECT_NEAR(loaded.topology.link(l.a, l.b).length_km, l.length_km, 5e-7);
  }
}

TEST_F(WorkbookTest, JsonRoundTripKeepsFullPrecision) {
  const Workbook wb = clustered_backbone();
  save_workbook(wb, dir_ / "wb.json", WorkbookFormat::kJson);
  EXPECT_EQ(load_workbook(dir_ / "wb.json"), wb);
}

TEST_F(WorkbookTest, QuotingSurvives) {
  Workbook wb{test::triangle(), {}, {{"S,1", "kind \"q\"", {{"note", "a\nb"}}}}, {}};
  save_workbook(wb, dir_);
  EXPECT_EQ(load_workbook(dir_).structures, wb.structures);
}

TEST_F(WorkbookTest, DanglingLinkIsNamed) {
  save_workbook(Workbook{test::triangle(), {}, {}, {}}, dir_);
  spit(dir_ / "links.csv", slurp(dir_ / "links.csv") + "A,GHOST,1.000000,backbone\r\n");
  try {
    load_workbook(dir_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingReference);
    EXPECT_EQ(e.offenders(), std::vector<std::string>{"GHOST"});
  }
}

TEST_F(WorkbookTest, RemovedNodesFlagEveryDanglingLink) {
  const Workbook wb = clustered_backbone();
  save_workbook(wb, dir_);
  // Drop three node rows by hand.
  const std::set<std::string> removed{"NCO1", "NCO2", "RCO3"};
  auto rows = csv::parse(slurp(dir_ / "nodes.csv"));
  std::string kept;
  for (const auto& r : rows) {
    if (!removed.contains(r[0])) kept += csv::row(r);
  }
  spit(dir_ / "nodes.csv", kept);
  // Oracle: endpoint names minus node names, plus cluster members.
  std::set<std::string> names;
  for (const Node& n : wb.topology.nodes()) {
    if (!removed.contains(n.name)) names.insert(n.name);
  }
  std::set<std::string> expect;
  for (const Link& l : wb.topology.links()) {
    if (!names.contains(l.a)) expect.insert(l.a);
    if (!names.contains(l.b)) expect.insert(l.b);
  }
  for (const auto& c : wb.clusters) {
    if (!names.contains(c.member)) expect.insert(c.member);
  }
  try {
    load_workbook(dir_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingReference);
    EXPECT_EQ(std::set<std::string>(e.offenders().begin(), e.offenders().end()), expect);
  }
}

TEST_F(WorkbookTest, EmptyClustersMeansNoRegions) {
  save_workbook(Workbook{test::triangle(), {}, {}, {}}, dir_);
  const Workbook wb = load_workbook(dir_);
  EXPECT_TRUE(wb.clusters.empty());
  EXPECT_TRUE(workbook_regions(wb).empty());
}

TEST_F(WorkbookTest, RegionsSkipTheTransitLabel) {
  Workbook wb = clustered_backbone();
  const auto regions = workbook_regions(wb);
  std::set<int> all;
  for (const auto& c : wb.clusters) all.insert(c.label);
  EXPECT_EQ(regions.size() + 1, all.size());
  for (int l : regions) EXPECT_FALSE(region_members(wb, l).empty());
}

TEST_F(WorkbookTest, MissingTablesAndVersion) {
  save_workbook(Workbook{test::triangle(), {}, {}, {}}, dir_);
  fs::remove(dir_ / "links.csv");
  fs::remove(dir_ / "report.csv");
  try {
    load_workbook(dir_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingTable);
    EXPECT_EQ(e.offenders(), (std::vector<std::string>{"links", "report"}));
  }
  save_workbook(Workbook{test::triangle(), {}, {}, {}}, dir_);
  std::string m = slurp(dir_ / "manifest.json");
  m.replace(m.find("\"version\": 1"), 12, "\"version\": 99");
  spit(dir_ / "manifest.json", m);
  expect_error([&] { load_workbook(dir_); }, ErrorCode::kVersionMismatch);
  fs::remove(dir_ / "manifest.json");
  expect_error([&] { load_workbook(dir_); }, ErrorCode::kMissingTable);
  expect_error([&] { load_workbook(dir_ / "nowhere"); }, ErrorCode::kIo);
}

TEST_F(WorkbookTest, MalformedContent) {
  save_workbook(Workbook{test::triangle(), {}, {}, {}}, dir_);
  spit(dir_ / "links.csv", "source,target,length_km,segment\r\nA,B,abc,backbone\r\n");
  expect_error([&] { load_workbook(dir_); }, ErrorCode::kInvalidWorkbook);
  spit(dir_ / "links.csv", "src,dst\r\n");
  expect_error([&] { load_workbook(dir_); }, ErrorCode::kInvalidWorkbook);
  fs::create_directories(dir_);
  spit(dir_ / "bad.json", "{not json");
  expect_error([&] { load_workbook(dir_ / "bad.json"); }, ErrorCode::kInvalidWorkbook);
}

TEST_F(WorkbookTest, SaveRefusesDanglingReferences) {
  Workbook wb{test::triangle(), {{0, "Q"}}, {}, {}};
  expect_error([&] { save_workbook(wb, dir_); }, ErrorCode::kDanglingReference);
  EXPECT_FALSE(fs::exists(dir_));
}

TEST(Csv, ParseHandlesQuotesAndLineEndings) {
  const auto rows = csv::parse("a,\"b,c\",\"d\"\"e\"\r\n,\n\"x\ny\"\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b,c", "d\"e"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"", ""}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"x\ny"}));
  EXPECT_EQ(format_fixed(-0.0000001), "0.000000");
  EXPECT_EQ(format_fixed(1.5), "1.500000");
}

size_t count(const std::string& s, const std::string& needle) {
  size_t n = 0;
  for (size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

TEST(Svg, TriangleHasThreeMarkersAndLines) {
  const std::string svg = render_svg(test::triangle());
  EXPECT_EQ(count(svg, "<circle"), 3u);
  EXPECT_EQ(count(svg, "<line"), 3u);
  EXPECT_EQ(count(svg, "<text"), 0u);
  SvgOptions opt;
  opt.labels = true;
  EXPECT_EQ(count(render_svg(test::triangle(), opt), "<text"), 3u);
}

TEST(Svg, AmplifiersAreTriangles) {
  Topology t = test::triangle();
  Node amp;
  amp.name = "AMP1";
  amp.type = NodeType::kAmplifier;
  amp.pos = {3, 3};
  t.add_node(amp);
  t.add_link("AMP1", "A", 5.0);
  const std::string svg = render_svg(t);
  EXPECT_EQ(count(svg, "<polygon class=\"amplifier\""), 1u);
  EXPECT_EQ(count(svg, "<circle"), 3u);
}

TEST(Svg, EmptyTopologyIsAnError) {
  expect_error([] { render_svg(Topology{}); }, ErrorCode::kEmptyTopology);
}

}  // namespace
}  // namespace topogen
