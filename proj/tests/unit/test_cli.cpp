#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "topogen/cli.hpp"

namespace topogen {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

const std::string kTable1 = "2:0.227,3:0.409,4:0.273,5:0.091";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("topogen_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::vector<std::string>& args) {
    out_.str({});
    err_.str({});
    return run_cli(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, BackboneWritesWorkbook) {
  ASSERT_EQ(run({"backbone", "--strategy", "default", "--nodes", "50", "--degrees", kTable1, "--seed", "7",
                 "--out", path("net")}),
            0)
      << err_.str();
  const Workbook wb = load_workbook(dir_ / "net");
  EXPECT_EQ(wb.topology.node_count(), 50u);
  EXPECT_FALSE(wb.report.empty());
  EXPECT_NE(out_.str().find("degree MAPE"), std::string::npos);
}

TEST_F(CliTest, SameArgvGivesIdenticalBytes) {
  for (const char* name : {"a", "b"}) {
    ASSERT_EQ(run({"backbone", "--strategy", "twin", "--nodes", "20", "--degrees", kTable1, "--seed", "11",
                   "--out", path(name)}),
              0)
        << err_.str();
  }
  EXPECT_EQ(read_dir(dir_ / "a"), read_dir(dir_ / "b"));
}

TEST_F(CliTest, JsonOutputAndSvg) {
  ASSERT_EQ(run({"backbone", "--nodes", "20", "--seed", "2", "--json", "--out", path("net.json"), "--svg",
                 path("net.svg"), "--labels"}),
            0)
      << err_.str();
  EXPECT_EQ(load_workbook(dir_ / "net.json").topology.node_count(), 20u);
  EXPECT_NE(slurp(dir_ / "net.svg").find("<svg"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"backbone", "--nodes", "many"}), 2);
  EXPECT_EQ(run({"backbone", "--strategy", "star", "--out", path("x")}), 2);
  EXPECT_NE(err_.str().find("error"), std::string::npos);
  EXPECT_EQ(run({"backbone", "--degrees", "2:0.5,3:0.2", "--out", path("x")}), 2);
  EXPECT_EQ(run({"horseshoe", "--end1", "A"}), 2);
}

TEST_F(CliTest, MissingInputExitsOne) {
  EXPECT_EQ(run({"cluster", "--in", path("missing")}), 1);
}

TEST_F(CliTest, InlineDegreesWinOverFile) {
  write("deg.json", R"({"2": 1.0})");
  ASSERT_EQ(run({"backbone", "--nodes", "30", "--degrees-file", path("deg.json"), "--degrees", kTable1,
                 "--seed", "3", "--out", path("net")}),
            0)
      << err_.str();
  const Workbook wb = load_workbook(dir_ / "net");
  std::map<std::string, double> targets;
  for (const ReportRow& r : wb.report) {
    if (r.metric == "degree" && r.target) targets[r.bin] = *r.target;
  }
  EXPECT_NEAR(targets["2"], 0.227, 1e-9);
  EXPECT_NEAR(targets["3"], 0.409, 1e-9);
}

TEST_F(CliTest, DegreesFileIsUsedAlone) {
  write("deg.json", R"({"2": 1.0})");
  ASSERT_EQ(run({"backbone", "--strategy", "twin", "--nodes", "6", "--degrees-file", path("deg.json"),
                 "--types", "national:1.0", "--seed", "3", "--out", path("net")}),
            0)
      << err_.str();
  const Workbook wb = load_workbook(dir_ / "net");
  for (const Node& n : wb.topology.nodes()) EXPECT_EQ(wb.topology.degree(n.name), 2u) << n.name;
}

TEST_F(CliTest, ValidateWritesSummary) {
  ASSERT_EQ(run({"validate", "--n", "20", "--metric", "degree", "--nodes", "50", "--degrees", kTable1,
                 "--layouts", "spectral,spring", "--seed", "1", "--out", path("tables")}),
            0)
      << err_.str();
  const std::string summary = slurp(dir_ / "tables" / "summary.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\r')), "strategy,algorithm,metric,best,average,failures");
  EXPECT_NE(summary.find("default,spectral,degree,"), std::string::npos);
  EXPECT_NE(summary.find("default,spring,degree,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "tables" / "best_degrees.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "tables" / "best_distances.csv"));
}

TEST_F(CliTest, FlowFromConfig) {
  write("flow.json", R"({"strategy": "twin", "seed": 1})");
  ASSERT_EQ(run({"flow", "--config", path("flow.json"), "--out", path("flow")}), 0) << err_.str();
  EXPECT_NE(out_.str().find("3 metro regions, 3 metro structures"), std::string::npos) << out_.str();
  const Workbook wb = load_workbook(dir_ / "flow");
  EXPECT_NO_THROW(check_integrity(wb));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  ::setenv(kOutEnv, path("env-out").c_str(), 1);
  const int code = run({"backbone", "--nodes", "12", "--seed", "5"});
  ::unsetenv(kOutEnv);
  ASSERT_EQ(code, 0) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "env-out" / "nodes.csv"));
}

TEST_F(CliTest, ClusterThenRingsThenHorseshoe) {
  ASSERT_EQ(run({"backbone", "--strategy", "twin", "--nodes", "6", "--types", "national:1.0", "--seed", "1",
                 "--out", path("wb")}),
            0)
      << err_.str();
  ASSERT_EQ(run({"cluster", "--in", path("wb"), "--epsilon", "0.2"}), 0) << err_.str();
  Workbook wb = load_workbook(dir_ / "wb");
  EXPECT_FALSE(wb.clusters.empty());
  ASSERT_EQ(run({"metro-rings", "--in", path("wb"), "--end1", "NCO1", "--end2", "NCO1_TW", "--nrings", "2",
                 "--prefix", "M1-", "--seed", "4"}),
            0)
      << err_.str();
  ASSERT_EQ(run({"horseshoe", "--in", path("wb"), "--end1", "NCO1", "--end2", "NCO2", "--hops", "3",
                 "--seed", "4"}),
            0)
      << err_.str();
  wb = load_workbook(dir_ / "wb");
  EXPECT_TRUE(wb.topology.has_node("LCO1"));
  EXPECT_TRUE(wb.topology.has_node("LCO2"));
  EXPECT_FALSE(wb.topology.has_node("LCO3"));
  EXPECT_EQ(wb.structures.size(), 3u);
}

}  // namespace
}  // namespace topogen
