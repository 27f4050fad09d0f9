// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// On-disk workbook: a directory holding manifest.json plus one CSV per table,
// or a single JSON document. Also renders topologies to SVG.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "topogen/error.hpp"
#include "topogen/model.hpp"

namespace topogen {

inline constexpr int kWorkbookVersion = 1;
inline constexpr std::string_view kWorkbookFormat = "topogen-workbook";

struct ClusterRow {
  int label = 0;
  std::string member;
  auto operator<=>(const ClusterRow&) const = default;
};

struct StructureRow {
  std::string id;
  std::string kind;
  std::vector<std::pair<std::string, std::string>> params;
  bool operator==(const StructureRow&) const = default;
};

struct ReportRow {
  std::string metric;
  std::string bin;
  std::optional<double> target;
  double achieved = 0.0;
  bool operator==(const ReportRow&) const = default;
};

struct Workbook {
  Topology topology;
  std::vector<ClusterRow> clusters;
  std::vector<StructureRow> structures;
  std::vector<ReportRow> report;

  bool operator==(const Workbook& o) const;
};

// Nodes sorted by name, links by (source, target).
inline Topology canonical(const Topology& topo) {
  std::vector<Node> nodes = topo.nodes();
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.name < b.name; });
  std::vector<Link> links = topo.links();
  std::sort(links.begin(), links.end(), [](const Link& x, const Link& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  Topology out(topo.segment());
  for (Node& n : nodes) out.add_node(std::move(n));
  for (const Link& l : links) out.add_link(l.a, l.b, l.length_km, l.segment);
  return out;
}

inline bool Workbook::operator==(const Workbook& o) const {
  std::vector<ClusterRow> c1 = clusters, c2 = o.clusters;
  std::sort(c1.begin(), c1.end());
  std::sort(c2.begin(), c2.end());
  return canonical(topology) == canonical(o.topology) && c1 == c2 &&
         structures == o.structures && report == o.report;
}

// Cluster rows from node labels, sorted by (label, member).
inline std::vector<ClusterRow> cluster_rows(const Topology& topo) {
  std::vector<ClusterRow> rows;
  for (const Node& n : topo.nodes()) {
    if (n.cluster) rows.push_back(ClusterRow{*n.cluster, n.name});
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

// Labels offered as metro regions: those with at least one non-transit
// member.
inline std::vector<int> workbook_regions(const Workbook& wb) {
  std::set<int> labels;
  for (const ClusterRow& r : wb.clusters) {
    if (!wb.topology.has_node(r.member) || wb.topology.node(r.member).type != NodeType::kTransit) {
      labels.insert(r.label);
    }
  }
  return {labels.begin(), labels.end()};
}

inline std::vector<std::string> region_members(const Workbook& wb, int label) {
  std::vector<std::string> out;
  for (const ClusterRow& r : wb.clusters) {
    if (r.label == label) out.push_back(r.member);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Every name referenced by links, clusters or reference_node fields that has
// no node. The error lists all offenders.
inline void check_integrity(const Workbook& wb) {
  const Topology& t = wb.topology;
  std::set<std::string> missing;
  for (const Link& l : t.links()) {
    if (!t.has_node(l.a)) missing.insert(l.a);
    if (!t.has_node(l.b)) missing.insert(l.b);
  }
  for (const ClusterRow& c : wb.clusters) {
    if (!t.has_node(c.member)) missing.insert(c.member);
  }
  for (const Node& n : t.nodes()) {
    if (n.reference_node && !t.has_node(*n.reference_node)) missing.insert(*n.reference_node);
  }
  if (!missing.empty()) {
    std::string msg = "dangling references:";
    for (const auto& m : missing) msg += " " + m;
    throw Error(ErrorCode::kDanglingReference, msg, {missing.begin(), missing.end()});
  }
}

// ---------------------------------------------------------------------------
// CSV.

namespace csv {

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += quote(fields[i]);
  }
  out += "\r\n";
  return out;
}

inline std::vector<std::vector<std::string>> parse(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> cur;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      cur.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        cur.push_back(std::move(field));
        rows.push_back(std::move(cur));
      }
      cur.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kInvalidWorkbook, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    cur.push_back(std::move(field));
    rows.push_back(std::move(cur));
  }
  return rows;
}

}  // namespace csv

// Fixed 6-decimal rendering; negative zero prints as zero.
inline std::string format_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidWorkbook,
                "bad number '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

inline int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidWorkbook,
                "bad integer '" + std::string(s) + "' in " + std::string(what));
  }
  return v;
}

inline std::string join_params(const std::vector<std::pair<std::string, std::string>>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + "=" + v;
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> split_params(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidWorkbook, "bad structure parameter '" + std::string(item) + "'");
    }
    out.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    pos = end + 1;
  }
  return out;
}

inline const std::vector<std::string> kNodeColumns = {"name", "type", "x", "y", "cluster",
                                                      "reference_node", "segment"};
inline const std::vector<std::string> kLinkColumns = {"source", "target", "length_km", "segment"};
inline const std::vector<std::string> kClusterColumns = {"label", "member"};
inline const std::vector<std::string> kStructureColumns = {"structure", "kind", "params"};
inline const std::vector<std::string> kReportColumns = {"metric", "bin", "target", "achieved"};
inline const std::vector<std::string> kTableNames = {"nodes", "links", "clusters", "structures",
                                                     "report"};

// CSV text of every table, keyed by table name.
inline std::map<std::string, std::string> workbook_tables(const Workbook& wb) {
  std::map<std::string, std::string> out;
  const Topology topo = canonical(wb.topology);

  std::string nodes = csv::row(kNodeColumns);
  for (const Node& n : topo.nodes()) {
    nodes += csv::row({n.name, std::string(to_string(n.type)), format_fixed(n.pos.x),
                       format_fixed(n.pos.y), n.cluster ? std::to_string(*n.cluster) : "",
                       n.reference_node.value_or(""), std::string(to_string(n.segment))});
  }
  out["nodes"] = std::move(nodes);

  std::string links = csv::row(kLinkColumns);
  for (const Link& l : topo.links()) {
    links += csv::row({l.a, l.b, format_fixed(l.length_km), std::string(to_string(l.segment))});
  }
  out["links"] = std::move(links);

  std::vector<ClusterRow> crow = wb.clusters;
  std::sort(crow.begin(), crow.end());
  std::string clusters = csv::row(kClusterColumns);
  for (const ClusterRow& c : crow) clusters += csv::row({std::to_string(c.label), c.member});
  out["clusters"] = std::move(clusters);

  std::string structures = csv::row(kStructureColumns);
  for (const StructureRow& s : wb.structures) {
    structures += csv::row({s.id, s.kind, join_params(s.params)});
  }
  out["structures"] = std::move(structures);

  std::string report = csv::row(kReportColumns);
  for (const ReportRow& r : wb.report) {
    report += csv::row({r.metric, r.bin, r.target ? format_fixed(*r.target) : "",
                        format_fixed(r.achieved)});
  }
  out["report"] = std::move(report);
  return out;
}

inline nlohmann::ordered_json manifest_json(const Workbook& wb) {
  nlohmann::ordered_json m;
  m["format"] = kWorkbookFormat;
  m["version"] = kWorkbookVersion;
  m["segment"] = to_string(wb.topology.segment());
  m["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : kTableNames) m["tables"].push_back({{"name", t}, {"file", t + ".csv"}});
  return m;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void expect_header(const std::vector<std::vector<std::string>>& rows,
                          const std::vector<std::string>& columns, std::string_view table) {
  if (rows.empty() || rows.front() != columns) {
    throw Error(ErrorCode::kInvalidWorkbook, "unexpected header in table " + std::string(table));
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != columns.size()) {
      throw Error(ErrorCode::kInvalidWorkbook, "row " + std::to_string(i) + " of table " +
                                                   std::string(table) + " has wrong arity");
    }
  }
}

inline std::optional<std::string> non_empty(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

// Links are collected unchecked so dangling endpoints can be reported
// together with other offenders.
struct RawWorkbook {
  Segment segment = Segment::kBackbone;
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<ClusterRow> clusters;
  std::vector<StructureRow> structures;
  std::vector<ReportRow> report;
};

inline Workbook finish(RawWorkbook raw) {
  Workbook wb;
  wb.topology.set_segment(raw.segment);
  std::set<std::string> missing;
  for (Node& n : raw.nodes) {
    if (wb.topology.has_node(n.name)) {
      throw Error(ErrorCode::kDuplicateNode, "node '" + n.name + "' listed twice");
    }
    wb.topology.add_node(std::move(n));
  }
  for (const Link& l : raw.links) {
    if (!wb.topology.has_node(l.a)) missing.insert(l.a);
    if (!wb.topology.has_node(l.b)) missing.insert(l.b);
  }
  wb.clusters = std::move(raw.clusters);
  wb.structures = std::move(raw.structures);
  wb.report = std::move(raw.report);
  for (const ClusterRow& c : wb.clusters) {
    if (!wb.topology.has_node(c.member)) missing.insert(c.member);
  }
  for (const Node& n : wb.topology.nodes()) {
    if (n.reference_node && !wb.topology.has_node(*n.reference_node)) {
      missing.insert(*n.reference_node);
    }
  }
  if (!missing.empty()) {
    std::string msg = "dangling references:";
    for (const auto& m : missing) msg += " " + m;
    throw Error(ErrorCode::kDanglingReference, msg, {missing.begin(), missing.end()});
  }
  for (const Link& l : raw.links) wb.topology.add_link(l.a, l.b, l.length_km, l.segment);
  return wb;
}

inline Node make_node(std::string name, NodeType type, Point pos, std::optional<int> cluster,
                      std::optional<std::string> ref, Segment segment) {
  Node n;
  n.name = std::move(name);
  n.type = type;
  n.pos = pos;
  n.cluster = cluster;
  n.reference_node = std::move(ref);
  n.color = color_for(type);
  n.segment = segment;
  return n;
}

template <typename F>
auto wrap_parse(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidParams) {
      throw Error(ErrorCode::kInvalidWorkbook, e.what());
    }
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidWorkbook, e.what());
  }
}

inline RawWorkbook parse_csv_tables(const Segment segment,
                                    const std::map<std::string, std::string>& tables) {
  RawWorkbook raw;
  raw.segment = segment;
  auto rows_of = [&](const std::string& name, const std::vector<std::string>& cols) {
    auto rows = csv::parse(tables.at(name));
    expect_header(rows, cols, name);
    rows.erase(rows.begin());
    return rows;
  };
  for (auto& r : rows_of("nodes", kNodeColumns)) {
    raw.nodes.push_back(make_node(
        r[0], node_type_from_string(r[1]), Point{parse_double(r[2], "nodes"), parse_double(r[3], "nodes")},
        r[4].empty() ? std::nullopt : std::optional<int>(parse_int(r[4], "nodes")), non_empty(r[5]),
        segment_from_string(r[6])));
  }
  for (auto& r : rows_of("links", kLinkColumns)) {
    raw.links.push_back(Link{r[0], r[1], parse_double(r[2], "links"), segment_from_string(r[3])});
  }
  for (auto& r : rows_of("clusters", kClusterColumns)) {
    raw.clusters.push_back(ClusterRow{parse_int(r[0], "clusters"), r[1]});
  }
  for (auto& r : rows_of("structures", kStructureColumns)) {
    raw.structures.push_back(StructureRow{r[0], r[1], split_params(r[2])});
  }
  for (auto& r : rows_of("report", kReportColumns)) {
    raw.report.push_back(ReportRow{
        r[0], r[1], r[2].empty() ? std::nullopt : std::optional<double>(parse_double(r[2], "report")),
        parse_double(r[3], "report")});
  }
  return raw;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// JSON form (full precision).

inline nlohmann::ordered_json workbook_to_json(const Workbook& wb) {
  const Topology topo = canonical(wb.topology);
  nlohmann::ordered_json j;
  j["format"] = kWorkbookFormat;
  j["version"] = kWorkbookVersion;
  j["segment"] = to_string(topo.segment());
  j["nodes"] = nlohmann::ordered_json::array();
  for (const Node& n : topo.nodes()) {
    nlohmann::ordered_json jn;
    jn["name"] = n.name;
    jn["type"] = to_string(n.type);
    jn["x"] = n.pos.x;
    jn["y"] = n.pos.y;
    jn["cluster"] = n.cluster ? nlohmann::ordered_json(*n.cluster) : nullptr;
    jn["reference_node"] = n.reference_node ? nlohmann::ordered_json(*n.reference_node) : nullptr;
    jn["segment"] = to_string(n.segment);
    jn["color"] = n.color;
    j["nodes"].push_back(std::move(jn));
  }
  j["links"] = nlohmann::ordered_json::array();
  for (const Link& l : topo.links()) {
    j["links"].push_back({{"source", l.a},
                          {"target", l.b},
                          {"length_km", l.length_km},
                          {"segment", to_string(l.segment)}});
  }
  std::vector<ClusterRow> crow = wb.clusters;
  std::sort(crow.begin(), crow.end());
  j["clusters"] = nlohmann::ordered_json::array();
  for (const ClusterRow& c : crow) j["clusters"].push_back({{"label", c.label}, {"member", c.member}});
  j["structures"] = nlohmann::ordered_json::array();
  for (const StructureRow& s : wb.structures) {
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.params) params[k] = v;
    j["structures"].push_back({{"structure", s.id}, {"kind", s.kind}, {"params", params}});
  }
  j["report"] = nlohmann::ordered_json::array();
  for (const ReportRow& r : wb.report) {
    j["report"].push_back({{"metric", r.metric},
                           {"bin", r.bin},
                           {"target", r.target ? nlohmann::ordered_json(*r.target) : nullptr},
                           {"achieved", r.achieved}});
  }
  return j;
}

// Structure params keep their written order, so documents are read as
// ordered_json.
inline Workbook workbook_from_json(const nlohmann::ordered_json& j) {
  return detail::wrap_parse([&] {
    if (!j.is_object() || j.value("format", "") != kWorkbookFormat) {
      throw Error(ErrorCode::kInvalidWorkbook, "not a workbook document");
    }
    if (!j.contains("version") || j.at("version") != kWorkbookVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "unsupported workbook version " + (j.contains("version") ? j.at("version").dump() : "<none>"));
    }
    for (const auto& t : kTableNames) {
      if (!j.contains(t)) throw Error(ErrorCode::kMissingTable, "missing table " + t, {t});
    }
    detail::RawWorkbook raw;
    raw.segment = segment_from_string(j.at("segment").get<std::string>());
    for (const auto& jn : j.at("nodes")) {
      const NodeType type = node_type_from_string(jn.at("type").get<std::string>());
      Node n = detail::make_node(
          jn.at("name").get<std::string>(), type, Point{jn.at("x").get<double>(), jn.at("y").get<double>()},
          jn.at("cluster").is_null() ? std::nullopt : std::optional<int>(jn.at("cluster").get<int>()),
          jn.at("reference_node").is_null()
              ? std::nullopt
              : std::optional<std::string>(jn.at("reference_node").get<std::string>()),
          segment_from_string(jn.at("segment").get<std::string>()));
      if (jn.contains("color")) n.color = jn.at("color").get<std::string>();
      raw.nodes.push_back(std::move(n));
    }
    for (const auto& jl : j.at("links")) {
      raw.links.push_back(Link{jl.at("source").get<std::string>(), jl.at("target").get<std::string>(),
                               jl.at("length_km").get<double>(),
                               segment_from_string(jl.at("segment").get<std::string>())});
    }
    for (const auto& jc : j.at("clusters")) {
      raw.clusters.push_back(ClusterRow{jc.at("label").get<int>(), jc.at("member").get<std::string>()});
    }
    for (const auto& js : j.at("structures")) {
      StructureRow s{js.at("structure").get<std::string>(), js.at("kind").get<std::string>(), {}};
      for (const auto& [k, v] : js.at("params").items()) s.params.emplace_back(k, v.get<std::string>());
      raw.structures.push_back(std::move(s));
    }
    for (const auto& jr : j.at("report")) {
      raw.report.push_back(ReportRow{
          jr.at("metric").get<std::string>(), jr.at("bin").get<std::string>(),
          jr.at("target").is_null() ? std::nullopt : std::optional<double>(jr.at("target").get<double>()),
          jr.at("achieved").get<double>()});
    }
    return detail::finish(std::move(raw));
  });
}

inline Workbook workbook_from_json(const nlohmann::json& j) {
  return workbook_from_json(nlohmann::ordered_json(j));
}

enum class WorkbookFormat { kCsv, kJson };

// CSV: `path` is a directory (created if needed). JSON: `path` is a file.
inline void save_workbook(const Workbook& wb, const std::filesystem::path& path,
                          WorkbookFormat format = WorkbookFormat::kCsv) {
  check_integrity(wb);
  if (format == WorkbookFormat::kJson) {
    if (path.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
    }
    detail::write_file(path, workbook_to_json(wb).dump(2) + "\n");
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + path.string() + ": " + ec.message());
  for (const auto& [name, text] : workbook_tables(wb)) detail::write_file(path / (name + ".csv"), text);
  detail::write_file(path / "manifest.json", manifest_json(wb).dump(2) + "\n");
}

inline Workbook load_workbook(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kIo, "no such path " + path.string());
  if (!std::filesystem::is_directory(path)) {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(detail::read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidWorkbook, std::string("malformed JSON: ") + e.what());
    }
    return workbook_from_json(j);
  }
  const auto manifest_path = path / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw Error(ErrorCode::kMissingTable, "missing manifest.json", {"manifest"});
  }
  return detail::wrap_parse([&] {
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(detail::read_file(manifest_path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidWorkbook, std::string("malformed manifest: ") + e.what());
    }
    if (m.value("format", "") != kWorkbookFormat) {
      throw Error(ErrorCode::kInvalidWorkbook, "manifest is not a workbook manifest");
    }
    if (!m.contains("version") || m.at("version") != kWorkbookVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "unsupported workbook version " + (m.contains("version") ? m.at("version").dump() : "<none>"));
    }
    std::map<std::string, std::string> files;
    for (const auto& t : m.at("tables")) files[t.at("name").get<std::string>()] = t.at("file").get<std::string>();
    std::map<std::string, std::string> tables;
    std::vector<std::string> missing;
    for (const auto& t : kTableNames) {
      auto it = files.find(t);
      if (it == files.end() || !std::filesystem::exists(path / it->second)) {
        missing.push_back(t);
        continue;
      }
      tables[t] = detail::read_file(path / it->second);
    }
    if (!missing.empty()) {
      std::string msg = "missing table(s):";
      for (const auto& t : missing) msg += " " + t;
      throw Error(ErrorCode::kMissingTable, msg, missing);
    }
    return detail::finish(
        detail::parse_csv_tables(segment_from_string(m.at("segment").get<std::string>()), tables));
  });
}

// ---------------------------------------------------------------------------
// SVG.

struct SvgOptions {
  bool labels = false;
  double width = 800.0;
  double height = 600.0;
  double margin = 30.0;
  double node_radius = 5.0;
};

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string render_svg(const Topology& topo, const SvgOptions& opt = {}) {
  require(!topo.empty(), ErrorCode::kEmptyTopology, "cannot render an empty topology");
  double minx = std::numeric_limits<double>::infinity(), maxx = -minx;
  double miny = minx, maxy = -minx;
  for (const Node& n : topo.nodes()) {
    minx = std::min(minx, n.pos.x);
    maxx = std::max(maxx, n.pos.x);
    miny = std::min(miny, n.pos.y);
    maxy = std::max(maxy, n.pos.y);
  }
  const double spanx = std::max(maxx - minx, 1e-12);
  const double spany = std::max(maxy - miny, 1e-12);
  const double scale = std::min((opt.width - 2 * opt.margin) / spanx,
                                (opt.height - 2 * opt.margin) / spany);
  auto px = [&](const Point& p) {
    return Point{opt.margin + (p.x - minx) * scale, opt.height - opt.margin - (p.y - miny) * scale};
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(opt.width) +
         "\" height=\"" + num(opt.height) + "\">\n";
  out += "<g stroke=\"#555555\" stroke-width=\"1\">\n";
  for (const Link& l : topo.links()) {
    const Point a = px(topo.node(l.a).pos), b = px(topo.node(l.b).pos);
    out += "<line x1=\"" + num(a.x) + "\" y1=\"" + num(a.y) + "\" x2=\"" + num(b.x) + "\" y2=\"" +
           num(b.y) + "\"><title>" + xml_escape(l.a + "-" + l.b) + " " + format_fixed(l.length_km) +
           " km</title></line>\n";
  }
  out += "</g>\n<g stroke=\"#000000\" stroke-width=\"0.5\">\n";
  const double r = opt.node_radius;
  for (const Node& n : topo.nodes()) {
    const Point p = px(n.pos);
    const std::string fill = xml_escape(n.color.empty() ? color_for(n.type) : n.color);
    if (n.type == NodeType::kAmplifier) {
      out += "<polygon class=\"amplifier\" points=\"" + num(p.x) + "," + num(p.y - r) + " " +
             num(p.x - r) + "," + num(p.y + r) + " " + num(p.x + r) + "," + num(p.y + r) +
             "\" fill=\"" + fill + "\"><title>" + xml_escape(n.name) + "</title></polygon>\n";
    } else {
      out += "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"" + num(r) + "\" fill=\"" +
             fill + "\"><title>" + xml_escape(n.name) + "</title></circle>\n";
    }
  }
  out += "</g>\n";
  if (opt.labels) {
    out += "<g font-family=\"sans-serif\" font-size=\"10\">\n";
    for (const Node& n : topo.nodes()) {
      const Point p = px(n.pos);
      out += "<text x=\"" + num(p.x + r + 1) + "\" y=\"" + num(p.y - r - 1) + "\">" +
             xml_escape(n.name) + "</text>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

inline void export_svg(const Topology& topo, const std::filesystem::path& path,
                       const SvgOptions& opt = {}) {
  const std::string svg = render_svg(topo, opt);
  detail::write_file(path, svg);
}

}  // namespace topogen
