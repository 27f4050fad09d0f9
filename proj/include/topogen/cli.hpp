// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Exit codes: 0 success, 1 generation or I/O
// failure, 2 usage error.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topogen/backbone.hpp"
#include "topogen/clustering.hpp"
#include "topogen/distributions.hpp"
#include "topogen/error.hpp"
#include "topogen/flow.hpp"
#include "topogen/metrics.hpp"
#include "topogen/metro_agg.hpp"
#include "topogen/metro_core.hpp"
#include "topogen/params_json.hpp"
#include "topogen/workbook.hpp"

namespace topogen {

inline constexpr const char* kOutEnv = "TOPOGEN_OUT";

inline std::string default_output_dir() {
  if (const char* env = std::getenv(kOutEnv); env && *env) return env;
  return "topogen-out";
}

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams:
    case ErrorCode::kUnknownStrategy:
    case ErrorCode::kMismatchedBins:
      return 2;
    default:
      return 1;
  }
}

// Degree/distance rows for the workbook report table.
inline std::vector<ReportRow> report_rows(const ValidationReport& r) {
  std::vector<ReportRow> rows;
  std::set<int> degrees;
  for (auto [d, p] : r.degree_target) degrees.insert(d);
  for (auto [d, p] : r.degree_achieved) degrees.insert(d);
  for (int d : degrees) {
    std::optional<double> target;
    if (!r.degree_target.empty()) {
      auto it = r.degree_target.find(d);
      target = it == r.degree_target.end() ? 0.0 : it->second;
    }
    auto it = r.degree_achieved.find(d);
    rows.push_back(ReportRow{"degree", std::to_string(d), target,
                             it == r.degree_achieved.end() ? 0.0 : it->second});
  }
  if (!r.degree_target.empty()) {
    rows.push_back(ReportRow{"degree_mape", "", std::nullopt, r.degree_mape});
    rows.push_back(ReportRow{"degree_other", "", std::nullopt, r.other_mass});
  }
  for (std::size_t i = 0; i < r.distance_bins.size(); ++i) {
    const auto [lo, hi] = r.distance_bins[i];
    std::optional<double> target;
    if (i < r.distance_target.size()) target = r.distance_target[i];
    rows.push_back(ReportRow{"distance", format_fixed(lo) + "-" + format_fixed(hi), target,
                             r.distance_achieved[i]});
  }
  if (!r.distance_bins.empty()) {
    rows.push_back(ReportRow{"distance_out_of_range", "", std::nullopt, r.distance_out_of_range});
  }
  if (r.distance_mape) rows.push_back(ReportRow{"distance_mape", "", std::nullopt, *r.distance_mape});
  return rows;
}

namespace cli_detail {

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidParams, "malformed JSON in " + path + ": " + e.what());
  }
}

// Shared generator options. A JSON file gives the base values; inline
// flags override it.
struct GenOptions {
  std::string params_file;
  std::string degrees_file;
  std::string degrees;
  std::string types;
  std::string ranges_file;
  std::string layout;
  std::optional<int> nodes;
  bool fit = false;
  std::optional<int> fit_iterations;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_retries;

  void add(CLI::App* app) {
    app->add_option("--params", params_file, "JSON file with generator parameters");
    app->add_option("--degrees", degrees, "degree distribution, e.g. 2:0.227,3:0.409");
    app->add_option("--degrees-file", degrees_file, "JSON file with a degree distribution");
    app->add_option("--types", types, "node type mix, e.g. national:0.7,regional:0.2,transit:0.1");
    app->add_option("--ranges-file", ranges_file, "JSON file with distance ranges");
    app->add_option("--layout", layout, "spring | kamada-kawai | spectral");
    app->add_option("--nodes", nodes, "number of nodes");
    app->add_flag("--fit", fit, "fit the km scale factor to the distance ranges");
    app->add_option("--fit-iterations", fit_iterations, "scale factors tried when fitting");
    app->add_option("--seed", seed, "random seed");
    app->add_option("--max-retries", max_retries, "configuration model attempts");
  }

  template <typename Params>
  void apply(Params& p) const {
    if (!degrees_file.empty()) p.degrees = json::degrees_from(read_json_file(degrees_file));
    if (!degrees.empty()) p.degrees = parse_degree_distribution(degrees);
    if (!types.empty()) p.type_mix = parse_type_mix(types);
    if (!ranges_file.empty()) p.distance_ranges = json::ranges_from(read_json_file(ranges_file));
    if (!layout.empty()) p.layout = layout_from_string(layout);
    if (nodes) p.nodes = *nodes;
    if (fit) p.fit_distances = true;
    if (fit_iterations) p.fit_iterations = *fit_iterations;
    if (seed) p.seed = *seed;
    if (max_retries) p.max_retries = *max_retries;
  }
};

struct OutOptions {
  std::string out;
  bool json = false;
  std::string svg;
  bool labels = false;

  void add(CLI::App* app) {
    app->add_option("--out", out, "output workbook (directory, or file with --json)");
    app->add_flag("--json", json, "write a single JSON file instead of CSV tables");
    app->add_option("--svg", svg, "also write an SVG image");
    app->add_flag("--labels", labels, "label nodes in the SVG");
  }

  std::string target(const std::string& fallback = {}) const {
    if (!out.empty()) return out;
    if (!fallback.empty()) return fallback;
    return default_output_dir();
  }

  void write(const Workbook& wb, std::ostream& log, const std::string& fallback = {}) const {
    const std::string path = target(fallback);
    save_workbook(wb, path, json ? WorkbookFormat::kJson : WorkbookFormat::kCsv);
    log << "workbook written to " << path << "\n";
    if (!svg.empty()) {
      SvgOptions opt;
      opt.labels = labels;
      export_svg(wb.topology, svg, opt);
      log << "image written to " << svg << "\n";
    }
  }
};

inline Workbook load_or_empty(const std::string& in) {
  if (in.empty()) return Workbook{};
  return load_workbook(in);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"Synthetic optical network topology generator", "topogen"};
  app.require_subcommand(1);

  // backbone
  auto* bb = app.add_subcommand("backbone", "generate a backbone topology");
  std::string bb_strategy = "default";
  GenOptions bb_gen;
  OutOptions bb_out;
  int regions = 9;
  double alpha = 0.4, beta = 0.1, min_distance = 0.02;
  bb->add_option("--strategy", bb_strategy, "default | twin | region");
  bb_gen.add(bb);
  bb->add_option("--regions", regions, "region strategy: number of regions");
  bb->add_option("--alpha", alpha, "region strategy: Waxman alpha");
  bb->add_option("--beta", beta, "region strategy: Waxman beta");
  bb->add_option("--min-distance", min_distance, "region strategy: minimum node distance");
  bb_out.add(bb);

  // cluster
  auto* cl = app.add_subcommand("cluster", "assign metro regions to a backbone workbook");
  std::string cl_in, cl_mode = "distance";
  double epsilon = 0.3;
  bool avoid_single = true;
  OutOptions cl_out;
  cl->add_option("--in", cl_in, "input workbook")->required();
  cl->add_option("--epsilon", epsilon, "neighborhood radius in layout units");
  cl->add_option("--mode", cl_mode, "distance | distance-connectivity");
  cl->add_flag("--avoid-single,!--allow-single", avoid_single, "merge single-node clusters");
  cl_out.add(cl);

  // metro-mesh
  auto* mm = app.add_subcommand("metro-mesh", "generate a metro core mesh");
  GenOptions mm_gen;
  OutOptions mm_out;
  std::string mm_in, mm_prefix;
  std::optional<int> mm_cluster;
  std::vector<std::string> mm_main;
  mm_gen.add(mm);
  mm->add_option("--in", mm_in, "workbook to read the metro region from and merge into");
  mm->add_option("--cluster", mm_cluster, "metro region label in the input workbook");
  mm->add_option("--main-nodes", mm_main, "names of the main (national) nodes")->delimiter(',');
  mm->add_option("--prefix", mm_prefix, "prefix for generated node names");
  mm_out.add(mm);

  // metro-rings
  auto* mr = app.add_subcommand("metro-rings", "generate an N-ring metro core structure");
  std::optional<int> nrings;
  std::string end1, end2, mr_prefix, rings_file, mr_in;
  int init_idx = 1;
  double var = 0.1;
  std::uint64_t mr_seed = 1;
  OutOptions mr_out;
  mr->add_option("--nrings", nrings, "1, 2, 3, 4 or 6 (sampled when omitted)");
  mr->add_option("--end1", end1, "first end node")->required();
  mr->add_option("--end2", end2, "second end node")->required();
  mr->add_option("--prefix", mr_prefix, "prefix for office names");
  mr->add_option("--init-idx", init_idx, "first office index");
  mr->add_option("--var", var, "relative ring length variability");
  mr->add_option("--rings-file", rings_file, "JSON ring catalog");
  mr->add_option("--in", mr_in, "workbook to merge into");
  mr->add_option("--seed", mr_seed, "random seed");
  mr_out.add(mr);

  // horseshoe
  auto* hs = app.add_subcommand("horseshoe", "generate a metro aggregation horseshoe");
  std::string hs_end1, hs_end2, hs_prefix = "LCO", hs_in, hs_params;
  std::optional<int> hops;
  int idx = 1;
  std::uint64_t hs_seed = 1;
  OutOptions hs_out;
  hs->add_option("--end1", hs_end1, "first hub")->required();
  hs->add_option("--end2", hs_end2, "second hub")->required();
  hs->add_option("--hops", hops, "hub-to-hub hops (sampled when omitted)");
  hs->add_option("--idx", idx, "first local office index");
  hs->add_option("--prefix", hs_prefix, "local office name prefix");
  hs->add_option("--params", hs_params, "JSON file with length ranges and colors");
  hs->add_option("--in", hs_in, "workbook to merge into");
  hs->add_option("--seed", hs_seed, "random seed");
  hs_out.add(hs);

  // flow
  auto* fl = app.add_subcommand("flow", "run the backbone-to-aggregation flow");
  std::string flow_config;
  OutOptions fl_out;
  fl->add_option("--config", flow_config, "flow configuration JSON");
  fl_out.add(fl);

  // validate
  auto* va = app.add_subcommand("validate", "best-of-N validation campaign");
  std::string va_strategy = "default", va_metric = "degree", va_layouts = "spectral";
  std::string va_segment = "backbone";
  int iterations = 1000;
  unsigned threads = 0;
  GenOptions va_gen;
  std::string va_out;
  int main_nodes = 5;
  va->add_option("--strategy", va_strategy, "default | twin | region");
  va->add_option("--n", iterations, "iterations");
  va->add_option("--metric", va_metric, "degree | distance");
  va->add_option("--layouts", va_layouts, "comma-separated layouts");
  va->add_option("--segment", va_segment, "backbone | metro-mesh");
  va->add_option("--national", main_nodes, "metro-mesh: national offices");
  va->add_option("--threads", threads, "worker threads (0 = all cores)");
  va_gen.add(va);
  va->add_option("--out", va_out, "output directory for the CSV tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bb) {
      const BackboneStrategy strategy = backbone_strategy_from_string(bb_strategy);
      BackboneParams p;
      if (!bb_gen.params_file.empty()) json::read_backbone(read_json_file(bb_gen.params_file), p);
      bb_gen.apply(p);
      Topology topo;
      if (strategy == BackboneStrategy::kRegion) {
        WaxmanRegionParams rp = json::region_from(nlohmann::json::object(), p);
        rp.regions = regions;
        rp.waxman_alpha = alpha;
        rp.waxman_beta = beta;
        rp.min_node_distance = min_distance;
        topo = generate_region_backbone(rp);
      } else {
        topo = generate_backbone(strategy, p);
      }
      Workbook wb;
      wb.topology = topo;
      wb.structures.push_back(StructureRow{"S1", "backbone",
                                           {{"strategy", std::string(to_string(strategy))},
                                            {"nodes", std::to_string(p.nodes)},
                                            {"seed", std::to_string(p.seed)}}});
      const ValidationReport r = validate_topology(topo, p.degrees, p.distance_ranges);
      wb.report = report_rows(r);
      out << "nodes " << topo.node_count() << ", links " << topo.link_count()
          << ", degree MAPE " << fmt(r.degree_mape) << "\n";
      bb_out.write(wb, out);
    } else if (*cl) {
      ClusterParams p;
      p.epsilon = epsilon;
      p.mode = cluster_mode_from_string(cl_mode);
      p.avoid_single = avoid_single;
      Workbook wb = load_workbook(cl_in);
      const ClusterAssignment ca = cluster_nodes(wb.topology, p);
      wb.topology = apply_clusters(wb.topology, ca);
      wb.clusters.clear();
      for (const auto& [name, label] : ca.labels) wb.clusters.push_back(ClusterRow{label, name});
      for (const auto& w : ca.warnings) err << "warning: " << w << "\n";
      out << ca.region_labels().size() << " metro regions\n";
      cl_out.write(wb, out, cl_in);
    } else if (*mm) {
      MetroMeshParams p;
      if (!mm_gen.params_file.empty()) json::read_mesh(read_json_file(mm_gen.params_file), p);
      mm_gen.apply(p);
      Workbook wb = load_or_empty(mm_in);
      if (mm_cluster) {
        require(!mm_in.empty(), ErrorCode::kInvalidParams, "--cluster needs --in");
        p.main_nodes = region_members(wb, *mm_cluster);
        require(!p.main_nodes.empty(), ErrorCode::kInvalidParams,
                "no metro region " + std::to_string(*mm_cluster));
      }
      if (!mm_main.empty()) p.main_nodes = mm_main;
      if (!mm_prefix.empty()) p.name_prefix = mm_prefix;
      Topology part = generate_metro_mesh(p);
      if (!mm_in.empty() && !p.main_nodes.empty() && wb.topology.has_node(p.main_nodes.front())) {
        detail::place_near(part, wb.topology, p.main_nodes.front(), p.main_nodes.back(), 0.15);
      }
      merge_into(wb.topology, part);
      if (mm_in.empty()) wb.topology.set_segment(Segment::kMetroCoreMesh);
      wb.structures.push_back(StructureRow{"S" + std::to_string(wb.structures.size() + 1), "mesh",
                                           {{"nodes", std::to_string(p.nodes)},
                                            {"seed", std::to_string(p.seed)}}});
      const ValidationReport r = validate_topology(part, p.degrees, p.distance_ranges);
      if (mm_in.empty()) wb.report = report_rows(r);
      out << "nodes " << part.node_count() << ", links " << part.link_count() << ", degree MAPE "
          << fmt(r.degree_mape) << "\n";
      mm_out.write(wb, out, mm_in);
    } else if (*mr) {
      Rng rng(mr_seed);
      const RingCatalog catalog =
          rings_file.empty() ? defaults::ring_catalog() : json::ring_catalog_from(read_json_file(rings_file));
      RingStructureSpec spec;
      spec.nrings = nrings ? *nrings : sample_nring_count(defaults::nring_occurrence(), rng);
      require(catalog.contains(spec.nrings), ErrorCode::kInvalidParams,
              "no ring configuration for " + std::to_string(spec.nrings) + " rings");
      spec.end1 = end1;
      spec.end2 = end2;
      spec.prefix = mr_prefix;
      spec.init_idx = init_idx;
      spec.var = var;
      spec.rings = catalog.at(spec.nrings);
      Workbook wb = load_or_empty(mr_in);
      RingStructure rs = generate_nring(spec, rng);
      if (!mr_in.empty()) {
        wb.topology.index_of(end1);
        wb.topology.index_of(end2);
        detail::place_near(rs.topology, wb.topology, end1, end2, 0.15);
      } else {
        wb.topology.set_segment(Segment::kMetroCoreRing);
      }
      merge_into(wb.topology, rs.topology);
      wb.structures.push_back(StructureRow{"S" + std::to_string(wb.structures.size() + 1), "nring",
                                           {{"nrings", std::to_string(spec.nrings)},
                                            {"end1", end1}, {"end2", end2},
                                            {"seed", std::to_string(mr_seed)}}});
      out << spec.nrings << "-ring structure, " << rs.topology.node_count() << " nodes\n";
      mr_out.write(wb, out, mr_in);
    } else if (*hs) {
      Rng rng(hs_seed);
      HorseshoeSpec spec;
      if (!hs_params.empty()) json::read_horseshoe(read_json_file(hs_params), spec);
      spec.end1 = hs_end1;
      spec.end2 = hs_end2;
      spec.hops = hops ? *hops : sample_hops(defaults::horseshoe_nodes(), rng);
      spec.idx = idx;
      spec.prefix = hs_prefix;
      Workbook wb = load_or_empty(hs_in);
      Horseshoe h = generate_horseshoe(spec, rng);
      if (!hs_in.empty()) {
        wb.topology.index_of(hs_end1);
        wb.topology.index_of(hs_end2);
      } else {
        wb.topology.set_segment(Segment::kMetroAggregation);
      }
      merge_into(wb.topology, h.topology);
      wb.structures.push_back(StructureRow{"S" + std::to_string(wb.structures.size() + 1), "horseshoe",
                                           {{"end1", hs_end1}, {"end2", hs_end2},
                                            {"hops", std::to_string(spec.hops)},
                                            {"total_km", format_fixed(h.total_km)}}});
      out << "horseshoe with " << spec.hops << " hops, " << format_fixed(h.total_km) << " km\n";
      hs_out.write(wb, out, hs_in);
    } else if (*fl) {
      FlowConfig cfg = flow_config.empty() ? FlowConfig{} : flow_config_from(read_json_file(flow_config));
      const FlowResult r = run_flow(cfg);
      for (const auto& w : r.warnings) err << "warning: " << w << "\n";
      out << r.regions << " metro regions, " << r.metro_structures << " metro structures, "
          << r.horseshoes << " horseshoes\n";
      OutOptions o = fl_out;
      if (o.out.empty()) o.out = cfg.output;
      if (cfg.format == WorkbookFormat::kJson) o.json = true;
      o.write(r.workbook, out);
    } else if (*va) {
      const Metric metric = metric_from_string(va_metric);
      require(va_segment == "backbone" || va_segment == "metro-mesh", ErrorCode::kInvalidParams,
              "segment must be backbone or metro-mesh");
      const bool metro = va_segment == "metro-mesh";
      const BackboneStrategy strategy = backbone_strategy_from_string(va_strategy);
      std::vector<LayoutStrategy> layouts;
      {
        std::stringstream ss(va_layouts);
        std::string item;
        while (std::getline(ss, item, ',')) layouts.push_back(layout_from_string(item));
      }
      require(!layouts.empty(), ErrorCode::kInvalidParams, "no layouts given");
      BackboneParams bp;
      MetroMeshParams mp;
      if (!va_gen.params_file.empty()) {
        const auto j = read_json_file(va_gen.params_file);
        json::read_backbone(j, bp);
        json::read_mesh(j, mp);
      }
      va_gen.apply(bp);
      va_gen.apply(mp);
      if (metro) {
        mp.main_nodes.clear();
        for (int k = 1; k <= main_nodes; ++k) mp.main_nodes.push_back("NCO" + std::to_string(k));
      }
      const auto seeds = derive_seeds(metro ? mp.seed : bp.seed, static_cast<std::size_t>(iterations));
      const DegreeDistribution& degrees = metro ? mp.degrees : bp.degrees;
      const DistanceRanges& ranges = metro ? mp.distance_ranges : bp.distance_ranges;

      std::string summary = csv::row({"strategy", "algorithm", "metric", "best", "average", "failures"});
      std::vector<std::string> deg_cols{"strategy", "algorithm"};
      for (auto [d, p] : degrees.entries) deg_cols.push_back(std::to_string(d));
      deg_cols.push_back("other");
      std::string best_degrees = csv::row(deg_cols);
      {
        std::vector<std::string> row{"inputs", ""};
        for (auto [d, p] : degrees.entries) row.push_back(format_fixed(p));
        row.push_back(format_fixed(0.0));
        best_degrees += csv::row(row);
      }
      std::vector<std::string> dist_cols{"strategy", "algorithm"};
      for (auto [lo, hi] : ranges.bins) dist_cols.push_back(format_fixed(lo) + "-" + format_fixed(hi));
      dist_cols.push_back("out_of_range");
      std::string best_distances = csv::row(dist_cols);
      {
        std::vector<std::string> row{"inputs", ""};
        for (double t : ranges.target) row.push_back(format_fixed(t));
        row.push_back(format_fixed(0.0));
        best_distances += csv::row(row);
      }

      const std::string strategy_name = metro ? "default" : std::string(to_string(strategy));
      for (LayoutStrategy layout : layouts) {
        auto generate = [&](std::uint64_t seed) {
          if (metro) {
            MetroMeshParams q = mp;
            q.layout = layout;
            q.seed = seed;
            return generate_metro_mesh(q);
          }
          BackboneParams q = bp;
          q.layout = layout;
          q.seed = seed;
          if (strategy == BackboneStrategy::kRegion) {
            WaxmanRegionParams rp = json::region_from(nlohmann::json::object(), q);
            return generate_region_backbone(rp);
          }
          return generate_backbone(strategy, q);
        };
        const CampaignResult r = best_of_n(generate, seeds, metric, degrees, ranges, threads);
        const std::string algo(to_string(layout));
        summary += csv::row({strategy_name, algo, va_metric, format_fixed(r.best_score),
                             format_fixed(r.average_score), std::to_string(r.failures)});
        std::vector<std::string> drow{strategy_name, algo};
        for (auto [d, p] : degrees.entries) {
          auto it = r.best_report.degree_achieved.find(d);
          drow.push_back(format_fixed(it == r.best_report.degree_achieved.end() ? 0.0 : it->second));
        }
        drow.push_back(format_fixed(r.best_report.other_mass));
        best_degrees += csv::row(drow);
        std::vector<std::string> xrow{strategy_name, algo};
        for (double a : r.best_report.distance_achieved) xrow.push_back(format_fixed(a));
        xrow.push_back(format_fixed(r.best_report.distance_out_of_range));
        best_distances += csv::row(xrow);
        out << strategy_name << "/" << algo << ": best " << fmt(r.best_score) << ", average "
            << fmt(r.average_score) << ", failures " << r.failures << "\n";
      }
      const std::filesystem::path dir = va_out.empty() ? default_output_dir() : va_out;
      write_text(dir / "summary.csv", summary);
      write_text(dir / "best_degrees.csv", best_degrees);
      write_text(dir / "best_distances.csv", best_distances);
      out << "tables written to " << dir.string() << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  std::vector<const char*> argv;
  argv.push_back("topogen");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace topogen
