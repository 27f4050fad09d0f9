#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "topogen/flow.hpp"

namespace topogen {
namespace {

namespace fs = std::filesystem;

std::string param(const StructureRow& r, const std::string& key) {
  for (const auto& [k, v] : r.params) {
    if (k == key) return v;
  }
  return {};
}

// Hub pairs joined by ring links directly or through amplifiers only.
std::set<LinkKey> ring_pairs(const Topology& t) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const Link& l : t.links()) {
    if (l.segment != Segment::kMetroCoreRing) continue;
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::set<LinkKey> out;
  for (const auto& [start, _] : adj) {
    if (t.node(start).type == NodeType::kAmplifier) continue;
    for (const std::string& first : adj[start]) {
      std::string prev = start, cur = first;
      while (t.node(cur).type == NodeType::kAmplifier) {
        const auto& nb = adj[cur];
        if (nb.size() != 2) {
          ADD_FAILURE() << "amplifier " << cur << " has degree " << nb.size();
          break;
        }
        const std::string next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
      }
      out.insert(start < cur ? LinkKey{start, cur} : LinkKey{cur, start});
    }
  }
  return out;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[e.path().filename().string()] = ss.str();
  }
  return files;
}

TEST(Flow, SixNodeTwinFlowCloses) {
  const FlowResult r = run_flow(FlowConfig{});
  const Workbook& wb = r.workbook;
  EXPECT_EQ(r.regions, 3);
  EXPECT_EQ(r.metro_structures, 3);
  EXPECT_NO_THROW(check_integrity(wb));

  int backbone = 0, rings = 0;
  std::set<LinkKey> shoes;
  for (const StructureRow& s : wb.structures) {
    if (s.kind == "backbone") ++backbone;
    if (s.kind == "nring") ++rings;
    if (s.kind == "horseshoe") {
      shoes.insert(link_key(param(s, "end1"), param(s, "end2")));
      const int hops = std::stoi(param(s, "hops"));
      EXPECT_GE(hops, 2);
      EXPECT_LE(hops, 8);
    }
  }
  EXPECT_EQ(backbone, 1);
  EXPECT_EQ(rings, 3);
  EXPECT_EQ(static_cast<int>(shoes.size()), r.horseshoes);
  EXPECT_EQ(wb.structures.size(), 1u + 3u + static_cast<std::size_t>(r.horseshoes));
  EXPECT_EQ(shoes, ring_pairs(wb.topology));
}

TEST(Flow, BackboneIsSixNodesInTwinPairs) {
  const FlowResult r = run_flow(FlowConfig{});
  int backbone = 0, twins = 0;
  for (const Node& n : r.workbook.topology.nodes()) {
    if (n.segment != Segment::kBackbone) continue;
    ++backbone;
    if (n.name.ends_with(kTwinSuffix)) ++twins;
  }
  EXPECT_EQ(backbone, 6);
  EXPECT_EQ(twins, 3);
}

TEST(Flow, HorseshoeInteriorsAreLocalOffices) {
  const FlowResult r = run_flow(FlowConfig{});
  std::set<std::string> names;
  for (const Node& n : r.workbook.topology.nodes()) {
    if (n.segment != Segment::kMetroAggregation) continue;
    EXPECT_EQ(n.type, NodeType::kLocal);
    EXPECT_TRUE(n.name.starts_with("LCO")) << n.name;
    EXPECT_TRUE(names.insert(n.name).second);
  }
  EXPECT_FALSE(names.empty());
}

TEST(Flow, IsDeterministicPerSeed) {
  FlowConfig c;
  c.seed = 9;
  const Workbook a = run_flow(c).workbook;
  const Workbook b = run_flow(c).workbook;
  EXPECT_EQ(workbook_to_json(a).dump(), workbook_to_json(b).dump());
}

TEST(Flow, MeshVariantAddsOneMeshPerRegion) {
  FlowConfig c;
  c.metro = MetroKind::kMesh;
  c.horseshoes = false;
  const FlowResult r = run_flow(c);
  int meshes = 0;
  for (const StructureRow& s : r.workbook.structures) meshes += s.kind == "mesh";
  EXPECT_EQ(meshes, r.regions);
  EXPECT_EQ(r.horseshoes, 0);
  EXPECT_NO_THROW(check_integrity(r.workbook));
}

TEST(Flow, ConfigFromJson) {
  const auto j = nlohmann::json::parse(R"({
    "strategy": "twin",
    "backbone": {"nodes": 6},
    "cluster": {"epsilon": 0.25},
    "metro": "nring",
    "seed": 3,
    "format": "json",
    "output": "out.json"
  })");
  const FlowConfig c = flow_config_from(j);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_DOUBLE_EQ(c.cluster.epsilon, 0.25);
  EXPECT_EQ(c.format, WorkbookFormat::kJson);
  EXPECT_EQ(c.output, "out.json");
  test::expect_error([] { flow_config_from(nlohmann::json::parse(R"({"format": "xlsx"})")); },
                     ErrorCode::kInvalidParams);
  test::expect_error([] { flow_config_from(nlohmann::json::parse(R"({"metro": "star"})")); },
                     ErrorCode::kUnknownStrategy);
}

TEST(Flow, ShippedConfigRunsTheSixNodeFlow) {
  std::ifstream in(std::string(TOPOGEN_SOURCE_DIR) + "/config/flow.json");
  ASSERT_TRUE(in);
  const FlowConfig c = flow_config_from(nlohmann::json::parse(in));
  const FlowResult r = run_flow(c);
  EXPECT_EQ(r.regions, 3);
  EXPECT_EQ(r.metro_structures, 3);
  EXPECT_EQ(workbook_to_json(r.workbook).dump(), workbook_to_json(run_flow(FlowConfig{}).workbook).dump());
}

TEST(Flow, SaveLoadSaveIsByteIdentical) {
  const fs::path root = fs::temp_directory_path() / "topogen_flow_test";
  fs::remove_all(root);
  const Workbook wb = run_flow(FlowConfig{}).workbook;
  save_workbook(wb, root / "first");
  save_workbook(load_workbook(root / "first"), root / "second");
  EXPECT_EQ(read_dir(root / "first"), read_dir(root / "second"));
  fs::remove_all(root);
}

}  // namespace
}  // namespace topogen
