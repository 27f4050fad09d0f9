#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "topogen/http.hpp"
#include "topogen/service.hpp"

namespace topogen {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  Response call(const std::string& method, const std::string& path, const Json& body = nullptr,
                std::map<std::string, std::string> query = {}) {
    return service_.handle(Request{method, path, std::move(query), body.is_null() ? "" : body.dump()});
  }

  static Json parse(const Response& r) { return Json::parse(r.body); }

  std::string create() {
    const Response r = call("POST", "/sessions");
    EXPECT_EQ(r.status, 201);
    return parse(r).at("id").get<std::string>();
  }

  // Six-node twin backbone where every node has degree 2: a single cycle.
  std::string twin_cycle() {
    const std::string id = create();
    const Response r = call("POST", "/sessions/" + id + "/backbone",
                            Json{{"strategy", "twin"},
                                 {"params", {{"nodes", 6}, {"degrees", "2:1.0"}, {"type_mix", "national:1.0"},
                                             {"seed", 1}}}});
    EXPECT_EQ(r.status, 200) << r.body;
    return id;
  }

  std::string twin_flow_backbone() {
    const std::string id = create();
    const Response r =
        call("POST", "/sessions/" + id + "/backbone",
             Json{{"strategy", "twin"}, {"params", {{"nodes", 6}, {"type_mix", "national:1.0"}, {"seed", 1}}}});
    EXPECT_EQ(r.status, 200) << r.body;
    return id;
  }

  Json topology(const std::string& id) { return parse(call("GET", "/sessions/" + id + "/topology"))["topology"]; }

  Service service_{ServiceOptions{.seed = 99}};
};

TEST_F(ServiceTest, TwinBackboneClustersIntoThreeRegions) {
  const std::string id = twin_flow_backbone();
  EXPECT_EQ(topology(id)["nodes"].size(), 6u);
  const Response post = call("POST", "/sessions/" + id + "/clusters", Json{{"epsilon", 0.2}});
  ASSERT_EQ(post.status, 200) << post.body;
  const Response get = call("GET", "/sessions/" + id + "/clusters");
  ASSERT_EQ(get.status, 200);
  EXPECT_EQ(parse(get)["labels"].size(), 3u) << get.body;
}

TEST_F(ServiceTest, DroppingACycleLinkWarns) {
  const std::string id = twin_cycle();
  const Json link = topology(id)["links"][0];
  const Response r = call("DELETE", "/sessions/" + id + "/links/" + link["source"].get<std::string>() + "/" +
                                        link["target"].get<std::string>());
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(parse(r)["warnings"], Json::array({"no longer 2-edge-connected"}));
}

TEST_F(ServiceTest, ErrorStatuses) {
  const std::string id = twin_cycle();
  EXPECT_EQ(call("GET", "/sessions/nope/topology").status, 404);
  EXPECT_EQ(call("POST", "/sessions/" + id + "/links", Json{{"a", "NCO1"}, {"b", "GHOST"}, {"length_km", 5}}).status,
            404);
  const Json link = topology(id)["links"][0];
  const Response dup = call("POST", "/sessions/" + id + "/links",
                            Json{{"a", link["source"]}, {"b", link["target"]}, {"length_km", 5}});
  EXPECT_EQ(dup.status, 409);
  EXPECT_EQ(parse(dup)["error"]["code"], "duplicate_link") << dup.body;
  EXPECT_EQ(call("POST", "/sessions/" + id + "/horseshoe", Json{{"end1", "NCO1"}, {"end2", "NCO1"}}).status, 422);
  EXPECT_EQ(call("POST", "/sessions/" + id + "/backbone", Json{{"strategy", "star"}}).status, 422);
  EXPECT_EQ(call("POST", "/sessions/" + id + "/links", Json{{"a", "NCO1"}}).status, 400);
  EXPECT_EQ(service_.handle(Request{"POST", "/sessions/" + id + "/links", {}, "{not json"}).status, 400);
  EXPECT_EQ(call("GET", "/elsewhere").status, 404);
  EXPECT_EQ(call("DELETE", "/sessions/" + id + "/links/NCO1/GHOST").status, 404);
}

TEST_F(ServiceTest, UndoRestoresPreviousWorkbook) {
  const std::string id = twin_cycle();
  const std::string before = call("GET", "/sessions/" + id + "/export").body;
  const Response add =
      call("POST", "/sessions/" + id + "/horseshoe", Json{{"end1", "NCO1"}, {"end2", "NCO2"}, {"hops", 3}});
  ASSERT_EQ(add.status, 200) << add.body;
  EXPECT_NE(call("GET", "/sessions/" + id + "/export").body, before);
  ASSERT_EQ(call("POST", "/sessions/" + id + "/undo").status, 200);
  EXPECT_EQ(call("GET", "/sessions/" + id + "/export").body, before);
  // Backbone generation was the only earlier mutation.
  ASSERT_EQ(call("POST", "/sessions/" + id + "/undo").status, 200);
  EXPECT_EQ(call("POST", "/sessions/" + id + "/undo").status, 409);
}

TEST_F(ServiceTest, FailedMutationLeavesNoTrace) {
  const std::string id = twin_cycle();
  const std::string before = call("GET", "/sessions/" + id + "/export").body;
  EXPECT_EQ(call("POST", "/sessions/" + id + "/links", Json{{"a", "NCO1"}, {"b", "GHOST"}, {"length_km", 5}}).status,
            404);
  EXPECT_EQ(call("GET", "/sessions/" + id + "/export").body, before);
  ASSERT_EQ(call("POST", "/sessions/" + id + "/undo").status, 200);
  EXPECT_EQ(call("POST", "/sessions/" + id + "/undo").status, 409);
}

TEST_F(ServiceTest, HorseshoeNamesAvoidClashes) {
  const std::string id = twin_cycle();
  for (int k = 0; k < 2; ++k) {
    ASSERT_EQ(call("POST", "/sessions/" + id + "/horseshoe", Json{{"end1", "NCO1"}, {"end2", "NCO2"}, {"hops", 3}})
                  .status,
              200);
  }
  std::set<std::string> names;
  const Json topo = topology(id);
  for (const auto& n : topo["nodes"]) names.insert(n["name"].get<std::string>());
  for (const char* n : {"LCO1", "LCO2", "LCO3", "LCO4"}) EXPECT_TRUE(names.contains(n)) << n;
}

TEST_F(ServiceTest, MetroRingOnRegion) {
  const std::string id = twin_flow_backbone();
  ASSERT_EQ(call("POST", "/sessions/" + id + "/clusters", Json{{"epsilon", 0.2}}).status, 200);
  const int label = parse(call("GET", "/sessions/" + id + "/clusters"))["labels"][0].get<int>();
  const Response r = call("POST", "/sessions/" + id + "/metro",
                          Json{{"cluster_label", label}, {"kind", "nring"}, {"params", {{"nrings", 2}, {"seed", 3}}}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(parse(r)["structure"], "S2");
  EXPECT_EQ(call("POST", "/sessions/" + id + "/metro", Json{{"cluster_label", 12345}}).status, 422);
}

TEST_F(ServiceTest, StatsReportMape) {
  const std::string id = twin_cycle();
  const Response r = call("GET", "/sessions/" + id + "/stats");
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_DOUBLE_EQ(parse(r)["report"]["degree_mape"].get<double>(), 0.0) << r.body;
  const Response q = call("GET", "/sessions/" + id + "/stats", nullptr, {{"degrees", "2:0.5,3:0.5"}});
  ASSERT_EQ(q.status, 200) << q.body;
  EXPECT_GT(parse(q)["report"]["degree_mape"].get<double>(), 0.0);
}

TEST_F(ServiceTest, Exports) {
  const std::string id = twin_cycle();
  const Response j = call("GET", "/sessions/" + id + "/export", nullptr, {{"format", "json"}});
  ASSERT_EQ(j.status, 200);
  const Workbook wb = workbook_from_json(parse(j));
  EXPECT_EQ(wb.topology.node_count(), 6u);
  const Response svg = call("GET", "/sessions/" + id + "/export", nullptr, {{"format", "svg"}});
  EXPECT_EQ(svg.content_type, "image/svg+xml");
  EXPECT_NE(svg.body.find("<svg"), std::string::npos);
  const Response csv = call("GET", "/sessions/" + id + "/export", nullptr, {{"format", "csv"}});
  EXPECT_TRUE(parse(csv).contains("nodes.csv"));
  EXPECT_TRUE(parse(csv).contains("manifest.json"));
  const Response table = call("GET", "/sessions/" + id + "/export", nullptr, {{"format", "csv"}, {"table", "links"}});
  EXPECT_EQ(table.content_type, "text/csv");
  EXPECT_EQ(call("GET", "/sessions/" + id + "/export", nullptr, {{"format", "xlsx"}}).status, 422);
}

TEST_F(ServiceTest, SessionFromUploadedWorkbook) {
  const std::string id = twin_cycle();
  const Json exported = parse(call("GET", "/sessions/" + id + "/export"));
  const Response r = call("POST", "/sessions", Json{{"workbook", exported}});
  ASSERT_EQ(r.status, 201) << r.body;
  const std::string copy = parse(r)["id"].get<std::string>();
  EXPECT_EQ(call("GET", "/sessions/" + copy + "/export").body, call("GET", "/sessions/" + id + "/export").body);
  EXPECT_EQ(call("DELETE", "/sessions/" + copy).status, 200);
  EXPECT_EQ(call("GET", "/sessions/" + copy).status, 404);
}

TEST_F(ServiceTest, UndoDepthIsBounded) {
  Service small(ServiceOptions{.undo_depth = 2, .seed = 5});
  const auto id = Json::parse(small.handle(Request{"POST", "/sessions", {}, ""}).body)["id"].get<std::string>();
  for (int s = 1; s <= 4; ++s) {
    const Json body{{"strategy", "twin"}, {"params", {{"nodes", 6}, {"seed", s}}}};
    ASSERT_EQ(small.handle(Request{"POST", "/sessions/" + id + "/backbone", {}, body.dump()}).status, 200);
  }
  EXPECT_EQ(small.handle(Request{"POST", "/sessions/" + id + "/undo", {}, ""}).status, 200);
  EXPECT_EQ(small.handle(Request{"POST", "/sessions/" + id + "/undo", {}, ""}).status, 200);
  EXPECT_EQ(small.handle(Request{"POST", "/sessions/" + id + "/undo", {}, ""}).status, 409);
}

TEST_F(ServiceTest, SnapshotsAreWritten) {
  const fs::path dir = fs::temp_directory_path() / "topogen_snapshots";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Service snap(ServiceOptions{.snapshot_dir = dir, .seed = 7});
  const auto id = Json::parse(snap.handle(Request{"POST", "/sessions", {}, ""}).body)["id"].get<std::string>();
  const Json body{{"strategy", "twin"}, {"params", {{"nodes", 6}, {"seed", 2}}}};
  ASSERT_EQ(snap.handle(Request{"POST", "/sessions/" + id + "/backbone", {}, body.dump()}).status, 200);
  EXPECT_EQ(load_workbook(dir / (id + ".json")).topology.node_count(), 6u);
  fs::remove_all(dir);
}

TEST_F(ServiceTest, ConcurrentSessionsAreIndependent) {
  std::vector<std::string> ids;
  for (int k = 0; k < 4; ++k) ids.push_back(create());
  std::vector<std::thread> workers;
  for (int k = 0; k < 4; ++k) {
    workers.emplace_back([&, k] {
      for (int s = 1; s <= 5; ++s) {
        const Json body{{"strategy", "default"}, {"params", {{"nodes", 20}, {"seed", s}}}};
        service_.handle(Request{"POST", "/sessions/" + ids[k] + "/backbone", {}, body.dump()});
        service_.handle(Request{"GET", "/sessions/" + ids[k] + "/stats", {}, ""});
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& id : ids) EXPECT_EQ(topology(id)["nodes"].size(), 20u);
}

TEST(HttpServer, ServesSessions) {
  Service service(ServiceOptions{.seed = 3});
  httplib::Server server;
  bind_routes(server, service);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  auto created = client.Post("/sessions", "", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = Json::parse(created->body)["id"].get<std::string>();
  auto bb = client.Post("/sessions/" + id + "/backbone", R"({"strategy":"twin","params":{"nodes":6}})",
                        "application/json");
  ASSERT_TRUE(bb);
  EXPECT_EQ(bb->status, 200);
  auto svg = client.Get("/sessions/" + id + "/export?format=svg");
  ASSERT_TRUE(svg);
  EXPECT_EQ(svg->get_header_value("Content-Type"), "image/svg+xml");
  auto missing = client.Get("/sessions/unknown/topology");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(Json::parse(missing->body)["error"]["code"], "unknown_session");

  server.stop();
  t.join();
}

}  // namespace
}  // namespace topogen
