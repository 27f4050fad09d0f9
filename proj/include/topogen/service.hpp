// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Transport-independent request handling for interactive editing sessions.
// Each session owns a workbook and a bounded undo stack; an HTTP binding
// lives in http.hpp.

#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topogen/backbone.hpp"
#include "topogen/clustering.hpp"
#include "topogen/error.hpp"
#include "topogen/flow.hpp"
#include "topogen/metrics.hpp"
#include "topogen/metro_agg.hpp"
#include "topogen/metro_core.hpp"
#include "topogen/model.hpp"
#include "topogen/params_json.hpp"
#include "topogen/workbook.hpp"

namespace topogen {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownNode:
    case ErrorCode::kUnknownLink:
      return 404;
    case ErrorCode::kDuplicateLink:
    case ErrorCode::kDuplicateNode:
      return 409;
    case ErrorCode::kGenerationFailed:
    case ErrorCode::kIo:
      return 500;
    default:
      return 422;
  }
}

struct ServiceOptions {
  std::size_t undo_depth = 100;
  // When set, every mutation writes <dir>/<session>.json.
  std::optional<std::filesystem::path> snapshot_dir;
  std::uint64_t seed = 0;  // 0 = nondeterministic session ids
};

class Service {
 public:
  explicit Service(ServiceOptions opt = {})
      : opt_(std::move(opt)), ids_(opt_.seed ? opt_.seed : std::random_device{}()) {}

  Response handle(const Request& req) {
    try {
      return route(req);
    } catch (const HttpError& e) {
      return error_response(e.status, e.code, e.what(), {});
    } catch (const Error& e) {
      return error_response(http_status(e.code()), std::string(to_string(e.code())), e.what(),
                            e.offenders());
    } catch (const nlohmann::json::exception& e) {
      return error_response(400, "bad_request", e.what(), {});
    } catch (const std::exception& e) {
      return error_response(500, "internal", e.what(), {});
    }
  }

  std::size_t session_count() const {
    std::shared_lock lock(sessions_mu_);
    return sessions_.size();
  }

 private:
  using Json = nlohmann::json;

  struct HttpError : std::runtime_error {
    HttpError(int s, std::string c, const std::string& msg)
        : std::runtime_error(msg), status(s), code(std::move(c)) {}
    int status;
    std::string code;
  };

  struct Session {
    std::string id;
    Workbook workbook;
    std::deque<Workbook> history;
    std::optional<DegreeDistribution> degree_target;
    std::optional<DistanceRanges> distance_target;
    std::uint64_t next_seed = 1;
    mutable std::shared_mutex mu;
  };

  static Response error_response(int status, const std::string& code, const std::string& message,
                                 const std::vector<std::string>& offenders) {
    Json body{{"error", {{"code", code}, {"message", message}, {"offenders", offenders}}}};
    return Response{status, body.dump(), "application/json"};
  }

  static Response ok(const Json& body, int status = 200) {
    return Response{status, body.dump(), "application/json"};
  }

  static std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= path.size()) {
      std::size_t end = path.find('/', pos);
      if (end == std::string_view::npos) end = path.size();
      if (end > pos) parts.emplace_back(path.substr(pos, end - pos));
      pos = end + 1;
    }
    return parts;
  }

  static Json parse_body(const Request& req) {
    if (req.body.empty()) return Json::object();
    Json j = Json::parse(req.body);
    if (!j.is_object()) throw HttpError(400, "bad_request", "request body must be a JSON object");
    return j;
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(sessions_mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw HttpError(404, "unknown_session", "no session '" + id + "'");
    return it->second;
  }

  std::string new_id() {
    std::lock_guard lock(id_mu_);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string id;
    std::uint64_t v = ids_();
    for (int i = 0; i < 16; ++i, v >>= 4) id += kHex[v & 0xF];
    return id;
  }

  void push_history(Session& s) {
    s.history.push_back(s.workbook);
    while (s.history.size() > opt_.undo_depth) s.history.pop_front();
  }

  void snapshot(const Session& s) const {
    if (!opt_.snapshot_dir) return;
    save_workbook(s.workbook, *opt_.snapshot_dir / (s.id + ".json"), WorkbookFormat::kJson);
  }

  // Runs `edit` on a copy of the workbook; the session changes only if it
  // succeeds and the result passes the integrity check.
  template <typename Edit>
  Json mutate(Session& s, Edit&& edit) {
    std::unique_lock lock(s.mu);
    Workbook next = s.workbook;
    Json result = edit(next);
    check_integrity(next);
    push_history(s);
    s.workbook = std::move(next);
    snapshot(s);
    return result;
  }

  std::uint64_t take_seed(Session& s, const Json& params) {
    if (params.contains("seed")) return params.at("seed").get<std::uint64_t>();
    std::unique_lock lock(s.mu);
    return s.next_seed++;
  }

  static Json subgraph(const Topology& topo, const std::set<std::string>& names) {
    Json nodes = Json::array(), links = Json::array();
    for (const Node& n : topo.nodes()) {
      if (names.contains(n.name)) nodes.push_back(json::to_json(n));
    }
    for (const Link& l : topo.links()) {
      if (names.contains(l.a) && names.contains(l.b)) links.push_back(json::to_json(l));
    }
    return Json{{"nodes", nodes}, {"links", links}};
  }

  static Json structure_subgraph(const Topology& part) {
    Json j = json::to_json(part);
    return Json{{"nodes", j["nodes"]}, {"links", j["links"]}};
  }

  static std::string next_structure_id(const Workbook& wb) {
    return "S" + std::to_string(wb.structures.size() + 1);
  }

  Response route(const Request& req) {
    const auto parts = split_path(req.path);
    const std::string& m = req.method;
    if (parts.empty() || parts[0] != "sessions") {
      throw HttpError(404, "unknown_route", "no route " + req.method + " " + req.path);
    }
    if (parts.size() == 1) {
      if (m == "POST") return create_session(req);
      throw HttpError(405, "method_not_allowed", "use POST /sessions");
    }
    auto session = find(parts[1]);
    Session& s = *session;
    const std::string what = parts.size() >= 3 ? parts[2] : "";
    if (parts.size() == 2 && m == "GET") return get_topology(s);
    if (parts.size() == 2 && m == "DELETE") {
      std::unique_lock lock(sessions_mu_);
      sessions_.erase(s.id);
      return ok(Json{{"deleted", s.id}});
    }
    if (parts.size() == 3) {
      if (what == "backbone" && m == "POST") return post_backbone(s, parse_body(req));
      if (what == "topology" && m == "GET") return get_topology(s);
      if (what == "stats" && m == "GET") return get_stats(s, req);
      if (what == "links" && m == "POST") return post_link(s, parse_body(req));
      if (what == "clusters" && m == "POST") return post_clusters(s, parse_body(req));
      if (what == "clusters" && m == "GET") return get_clusters(s);
      if (what == "metro" && m == "POST") return post_metro(s, parse_body(req));
      if (what == "horseshoe" && m == "POST") return post_horseshoe(s, parse_body(req));
      if (what == "undo" && m == "POST") return post_undo(s);
      if (what == "export" && m == "GET") return get_export(s, req);
    }
    if (parts.size() == 5 && what == "links" && m == "DELETE") return delete_link(s, parts[3], parts[4]);
    throw HttpError(404, "unknown_route", "no route " + req.method + " " + req.path);
  }

  Response create_session(const Request& req) {
    const Json body = parse_body(req);
    auto s = std::make_shared<Session>();
    s->id = new_id();
    if (body.contains("workbook")) s->workbook = workbook_from_json(body.at("workbook"));
    {
      std::unique_lock lock(sessions_mu_);
      sessions_.emplace(s->id, s);
    }
    snapshot(*s);
    return ok(Json{{"id", s->id}, {"topology", json::to_json(s->workbook.topology)}}, 201);
  }

  Response get_topology(const Session& s) const {
    std::shared_lock lock(s.mu);
    return ok(Json{{"id", s.id},
                   {"topology", json::to_json(s.workbook.topology)},
                   {"survivability", s.workbook.topology.node_count() >= 2
                                         ? json::to_json(survivability_check(s.workbook.topology))
                                         : Json(nullptr)}});
  }

  Response post_backbone(Session& s, const Json& body) {
    const BackboneStrategy strategy =
        backbone_strategy_from_string(body.value("strategy", std::string("default")));
    const Json params = body.value("params", Json::object());
    BackboneParams p;
    json::read_backbone(params, p);
    if (!params.contains("seed")) p.seed = take_seed(s, params);
    Topology topo;
    if (strategy == BackboneStrategy::kRegion) {
      topo = generate_region_backbone(json::region_from(params, p));
    } else {
      topo = generate_backbone(strategy, p);
    }
    Json result = mutate(s, [&](Workbook& wb) {
      wb = Workbook{};
      wb.topology = topo;
      wb.structures.push_back(StructureRow{"S1", "backbone",
                                           {{"strategy", std::string(to_string(strategy))},
                                            {"nodes", std::to_string(p.nodes)},
                                            {"seed", std::to_string(p.seed)}}});
      return Json{{"topology", json::to_json(wb.topology)}, {"warnings", Json::array()}};
    });
    {
      std::unique_lock lock(s.mu);
      s.degree_target = p.degrees;
      s.distance_target = p.distance_ranges;
    }
    return ok(result);
  }

  Response get_stats(const Session& s, const Request& req) const {
    std::shared_lock lock(s.mu);
    std::optional<DegreeDistribution> degrees = s.degree_target;
    std::optional<DistanceRanges> ranges = s.distance_target;
    if (auto it = req.query.find("degrees"); it != req.query.end()) {
      degrees = parse_degree_distribution(it->second);
    }
    if (auto it = req.query.find("ranges"); it != req.query.end()) {
      ranges = json::ranges_from(Json::parse(it->second));
    }
    const ValidationReport r = validate_topology(s.workbook.topology, degrees, ranges);
    return ok(Json{{"report", json::to_json(r)}});
  }

  Response post_link(Session& s, const Json& body) {
    const std::string a = body.at("a").get<std::string>();
    const std::string b = body.at("b").get<std::string>();
    const double len = body.at("length_km").get<double>();
    return ok(mutate(s, [&](Workbook& wb) {
      wb.topology = add_link(wb.topology, a, b, len);
      return Json{{"subgraph", subgraph(wb.topology, {a, b})},
                  {"warnings", survivability_warnings(wb.topology)}};
    }));
  }

  Response delete_link(Session& s, const std::string& a, const std::string& b) {
    return ok(mutate(s, [&](Workbook& wb) {
      EditResult r = drop_link(wb.topology, a, b);
      wb.topology = std::move(r.topology);
      return Json{{"subgraph", subgraph(wb.topology, {a, b})}, {"warnings", r.warnings}};
    }));
  }

  Response post_clusters(Session& s, const Json& body) {
    const ClusterParams p = json::cluster_from(body);
    return ok(mutate(s, [&](Workbook& wb) {
      const ClusterAssignment ca = cluster_nodes(wb.topology, p);
      // Metro nodes are not clustered; only labels of clustered nodes change.
      wb.topology = apply_clusters(wb.topology, ca);
      wb.clusters.clear();
      for (const auto& [name, label] : ca.labels) wb.clusters.push_back(ClusterRow{label, name});
      std::sort(wb.clusters.begin(), wb.clusters.end());
      return Json{{"clusters", clusters_json(wb)}, {"warnings", ca.warnings}};
    }));
  }

  static Json clusters_json(const Workbook& wb) {
    Json regions = Json::object();
    for (int label : workbook_regions(wb)) regions[std::to_string(label)] = region_members(wb, label);
    Json all = Json::object();
    std::set<int> labels;
    for (const ClusterRow& r : wb.clusters) labels.insert(r.label);
    for (int label : labels) all[std::to_string(label)] = region_members(wb, label);
    return Json{{"labels", workbook_regions(wb)}, {"regions", regions}, {"all", all}};
  }

  Response get_clusters(const Session& s) const {
    std::shared_lock lock(s.mu);
    return ok(clusters_json(s.workbook));
  }

  Response post_metro(Session& s, const Json& body) {
    const int label = body.at("cluster_label").get<int>();
    const MetroKind kind = metro_kind_from_string(body.value("kind", std::string("nring")));
    const Json params = body.value("params", Json::object());
    const std::uint64_t seed = take_seed(s, params);
    return ok(mutate(s, [&](Workbook& wb) {
      const auto regions = workbook_regions(wb);
      if (std::find(regions.begin(), regions.end(), label) == regions.end()) {
        throw Error(ErrorCode::kInvalidParams, "no metro region " + std::to_string(label));
      }
      const std::vector<std::string> members = region_members(wb, label);
      const std::string prefix = params.value("prefix", "M" + std::to_string(label) + "-");
      Topology part;
      StructureRow row{next_structure_id(wb), std::string(to_string(kind)), {}};
      if (kind == MetroKind::kMesh) {
        MetroMeshParams mp;
        json::read_mesh(params, mp);
        if (mp.main_nodes.empty()) mp.main_nodes = members;
        if (!params.contains("name_prefix")) mp.name_prefix = prefix;
        mp.seed = seed;
        part = generate_metro_mesh(mp);
        detail::place_near(part, wb.topology, mp.main_nodes.front(), mp.main_nodes.back(), 0.15);
        row.params = {{"cluster", std::to_string(label)}, {"nodes", std::to_string(mp.nodes)},
                      {"prefix", mp.name_prefix}, {"seed", std::to_string(seed)}};
      } else {
        Json spec_json = params;
        if (!spec_json.contains("end1") || !spec_json.contains("end2")) {
          const auto ends = detail::region_ends(members);
          if (!ends) throw Error(ErrorCode::kInvalidParams, "region has fewer than two nodes");
          spec_json["end1"] = ends->first;
          spec_json["end2"] = ends->second;
        }
        if (!spec_json.contains("prefix")) spec_json["prefix"] = prefix;
        Rng rng(seed);
        if (!spec_json.contains("nrings")) {
          spec_json["nrings"] = sample_nring_count(defaults::nring_occurrence(), rng);
        }
        const RingStructureSpec spec = json::ring_spec_from(spec_json, defaults::ring_catalog());
        for (const auto& e : {spec.end1, spec.end2}) wb.topology.index_of(e);
        part = generate_nring(spec, rng).topology;
        detail::place_near(part, wb.topology, spec.end1, spec.end2, 0.15);
        row.params = {{"cluster", std::to_string(label)}, {"nrings", std::to_string(spec.nrings)},
                      {"end1", spec.end1}, {"end2", spec.end2}, {"prefix", spec.prefix},
                      {"seed", std::to_string(seed)}};
      }
      for (const Node& n : part.nodes()) {
        if (wb.topology.has_node(n.name) && wb.topology.node(n.name).segment != Segment::kBackbone) {
          throw Error(ErrorCode::kDuplicateNode, "node '" + n.name + "' already exists", {n.name});
        }
      }
      merge_into(wb.topology, part);
      wb.structures.push_back(row);
      return Json{{"structure", row.id}, {"subgraph", structure_subgraph(part)},
                  {"warnings", Json::array()}};
    }));
  }

  Response post_horseshoe(Session& s, const Json& body) {
    HorseshoeSpec spec;
    const Json params = body.value("params", Json::object());
    json::read_horseshoe(params, spec);
    spec.end1 = body.at("end1").get<std::string>();
    spec.end2 = body.at("end2").get<std::string>();
    if (body.contains("hops")) spec.hops = body.at("hops").get<int>();
    spec.validate();
    const std::uint64_t seed = take_seed(s, params);
    return ok(mutate(s, [&](Workbook& wb) {
      wb.topology.index_of(spec.end1);
      wb.topology.index_of(spec.end2);
      HorseshoeSpec hs = spec;
      if (!params.contains("idx")) {
        hs.idx = 1;
        for (bool clash = true; clash;) {
          clash = false;
          for (int k = 0; k < hs.hops - 1 && !clash; ++k) {
            clash = wb.topology.has_node(hs.prefix + std::to_string(hs.idx + k));
          }
          if (clash) ++hs.idx;
        }
      }
      Rng rng(seed);
      Horseshoe h = generate_horseshoe(hs, rng);
      for (std::size_t k = 1; k + 1 < h.path.size(); ++k) {
        if (wb.topology.has_node(h.path[k])) {
          throw Error(ErrorCode::kDuplicateNode, "node '" + h.path[k] + "' already exists", {h.path[k]});
        }
      }
      const Point pa = wb.topology.node(hs.end1).pos, pb = wb.topology.node(hs.end2).pos;
      for (std::size_t k = 1; k + 1 < h.path.size(); ++k) {
        Node& n = h.topology.node(h.path[k]);
        const double t = n.pos.x / h.total_km;
        n.pos = Point{pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y) - 0.05};
      }
      merge_into(wb.topology, h.topology);
      StructureRow row{next_structure_id(wb), "horseshoe",
                       {{"end1", hs.end1}, {"end2", hs.end2}, {"hops", std::to_string(hs.hops)},
                        {"idx", std::to_string(hs.idx)}, {"total_km", format_fixed(h.total_km)}}};
      wb.structures.push_back(row);
      return Json{{"structure", row.id}, {"subgraph", structure_subgraph(h.topology)},
                  {"warnings", Json::array()}};
    }));
  }

  Response post_undo(Session& s) {
    std::unique_lock lock(s.mu);
    if (s.history.empty()) throw HttpError(409, "nothing_to_undo", "undo history is empty");
    s.workbook = std::move(s.history.back());
    s.history.pop_back();
    snapshot(s);
    return ok(Json{{"topology", json::to_json(s.workbook.topology)},
                   {"undo_remaining", s.history.size()},
                   {"warnings", Json::array()}});
  }

  Response get_export(const Session& s, const Request& req) const {
    std::shared_lock lock(s.mu);
    std::string format = "json";
    if (auto it = req.query.find("format"); it != req.query.end()) format = it->second;
    if (format == "json") return ok(workbook_to_json(s.workbook));
    if (format == "svg") {
      SvgOptions opt;
      if (auto it = req.query.find("labels"); it != req.query.end()) opt.labels = it->second != "0";
      return Response{200, render_svg(s.workbook.topology, opt), "image/svg+xml"};
    }
    if (format == "csv") {
      auto tables = workbook_tables(s.workbook);
      if (auto it = req.query.find("table"); it != req.query.end()) {
        auto t = tables.find(it->second);
        if (t == tables.end()) throw Error(ErrorCode::kMissingTable, "no table " + it->second, {it->second});
        return Response{200, t->second, "text/csv"};
      }
      Json files = Json::object();
      for (const auto& [name, text] : tables) files[name + ".csv"] = text;
      files["manifest.json"] = manifest_json(s.workbook).dump(2) + "\n";
      return ok(files);
    }
    throw Error(ErrorCode::kInvalidParams, "format must be csv, json or svg");
  }

  ServiceOptions opt_;
  mutable std::shared_mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex id_mu_;
  std::mt19937_64 ids_;
};

}  // namespace topogen
