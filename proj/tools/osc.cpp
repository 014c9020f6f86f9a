// osc: command-line front end for the oscillation library.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osc/io.hpp"
#include "osc/osc.hpp"

namespace {

using namespace osc;

struct Globals {
  int schedule_n = 64;
  double tol = kEpsGeom;
  int max_sweeps = 200;
  std::uint64_t seed = 0;
  std::string manifest;
};

void print_path(const Polyline& p) {
  for (Point q : p.vertices()) std::cout << io::num(q.x) << ' ' << io::num(q.y) << '\n';
}

const char* boolstr(bool b) { return b ? "true" : "false"; }

ParallelLinePair parse_pair(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw IoError("--pair expects angle,center,gap");
    }
  }
  if (v.size() != 3) throw IoError("--pair expects angle,center,gap");
  return ParallelLinePair(v[0], v[1], v[2]);
}

// Bounding box for a path without a domain: its own box, widened when flat.
BBox path_bbox(const Polyline& p) {
  BBox b = BBox::of(p.vertices());
  const double span = std::max({b.width(), b.height(), 1.0});
  if (!(b.width() > 0.0)) {
    b.xmin -= 0.5 * span;
    b.xmax += 0.5 * span;
  }
  if (!(b.height() > 0.0)) {
    b.ymin -= 0.5 * span;
    b.ymax += 0.5 * span;
  }
  return b;
}

SolverOptions solver_options(const PlanarDomain& d, const Globals& g) {
  SolverOptions o;
  o.max_sweeps = g.max_sweeps;
  o.tol = g.tol * d.diameter();
  return o;
}

void write_manifest(const Globals& g, const std::vector<std::string>& argv, const BBox& bbox,
                    const std::vector<std::string>& files) {
  if (g.manifest.empty()) return;
  io::RunManifest m;
  m.argv = argv;
  m.schedule_n = g.schedule_n;
  m.bbox = bbox;
  m.tol = g.tol;
  m.max_sweeps = g.max_sweeps;
  m.seed = g.seed;
  for (const auto& f : files) m.add_input(f);
  io::write_file(g.manifest, m.to_json().dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillation functionals, oscillatory geodesics and homotopy certificates for planar domains"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--schedule-n", g.schedule_n, "Number of line pairs in the direction schedule")->capture_default_str();
  app.add_option("--tol", g.tol, "Relative geometric tolerance")->capture_default_str();
  app.add_option("--max-sweeps", g.max_sweeps, "Sweep budget for the geodesic solver")->capture_default_str();
  app.add_option("--seed", g.seed, "Cut-system seed")->capture_default_str();
  app.add_option("--manifest", g.manifest, "Write a run manifest (JSON) to this file");
  const std::vector<std::string> args(argv, argv + argc);

  std::string pair_s, domain_f, path_f, path2_f, graph_f, epath_f, f_f, g_f, alpha_f, svg_f, frames_dir;
  double angle = 0.0, px = 0.0, py = 0.0;
  int samples = 64, steps = 64, trials = 30;
  std::vector<double> deltas{1e-2, 1e-3, 1e-4};

  auto* band = app.add_subcommand("band", "Band value g of a line pair at a point");
  band->add_option("--pair", pair_s, "angle,center,gap")->required();
  band->add_option("x", px)->required();
  band->add_option("y", py)->required();

  auto* osc_cmd = app.add_subcommand("oscillation", "Oscillation of a path with respect to a line pair");
  osc_cmd->add_option("path", path_f)->required();
  osc_cmd->add_option("--pair", pair_s, "angle,center,gap")->required();

  auto* total = app.add_subcommand("total", "Total oscillation of a path");
  total->add_option("path", path_f)->required();
  total->add_option("--domain", domain_f, "Use this domain's bounding box for the schedule");

  auto* reduce = app.add_subcommand("reduce", "Reduce a path with respect to one direction");
  reduce->add_option("domain", domain_f)->required();
  reduce->add_option("path", path_f)->required();
  reduce->add_option("--angle", angle, "Direction in radians")->required();

  auto* geo = app.add_subcommand("geodesic", "Oscillatory geodesic in the class of a path");
  geo->add_option("domain", domain_f)->required();
  geo->add_option("path", path_f)->required();
  geo->add_option("--svg", svg_f, "Draw domain, input and output");

  auto* homotopic = app.add_subcommand("homotopic", "Whether two paths are homotopic rel endpoints");
  homotopic->add_option("domain", domain_f)->required();
  homotopic->add_option("path-a", path_f)->required();
  homotopic->add_option("path-b", path2_f)->required();

  auto* nullh = app.add_subcommand("nullhomotopic", "Whether a closed path is nullhomotopic");
  nullh->add_option("domain", domain_f)->required();
  nullh->add_option("path", path_f)->required();

  auto* oracle = app.add_subcommand("oracle-shortest", "Shortest path homotopic rel endpoints");
  oracle->add_option("domain", domain_f)->required();
  oracle->add_option("path", path_f)->required();
  oracle->add_option("--svg", svg_f, "Draw domain, input and output");

  auto* greduce = app.add_subcommand("graph-reduce", "Reduce an edge path in an embedded graph");
  greduce->add_option("graph", graph_f)->required();
  greduce->add_option("edge-path", epath_f)->required();

  auto* maph = app.add_subcommand("map-homotopy", "Sampled homotopy between two maps of a graph");
  maph->add_option("domain", domain_f)->required();
  maph->add_option("map-f", f_f)->required();
  maph->add_option("map-g", g_f)->required();
  maph->add_option("alpha", alpha_f, "Path from g(y0) to f(y0)")->required();
  maph->add_option("--samples", samples)->capture_default_str();
  maph->add_option("--steps", steps)->capture_default_str();
  maph->add_option("--svg-frames", frames_dir, "Directory for one SVG per time step");

  auto* probe = app.add_subcommand("probe-continuity", "Endpoint-perturbation continuity probe");
  probe->add_option("domain", domain_f)->required();
  probe->add_option("path", path_f)->required();
  probe->add_option("--deltas", deltas)->delimiter(',')->capture_default_str();
  probe->add_option("--trials", trials)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (g.schedule_n < 1) throw IoError("--schedule-n must be at least 1");
    if (!(g.tol > 0.0)) throw IoError("--tol must be positive");

    auto load_domain = [&] { return io::parse_domain(io::load_json(domain_f), domain_f); };
    auto load_path = [&](const std::string& f) { return io::parse_path(io::load_json(f), f); };

    if (band->parsed()) {
      const auto pair = parse_pair(pair_s);
      std::cout << io::num(band_value(pair, {px, py})) << '\n';
      write_manifest(g, args, {}, {});
    } else if (osc_cmd->parsed()) {
      const auto pair = parse_pair(pair_s);
      std::cout << io::num(oscillation(load_path(path_f), pair)) << '\n';
      write_manifest(g, args, {}, {path_f});
    } else if (total->parsed()) {
      const Polyline p = load_path(path_f);
      const BBox bbox = domain_f.empty() ? path_bbox(p) : load_domain().bbox();
      std::cout << io::num(total_oscillation(p, make_schedule(g.schedule_n, bbox))) << '\n';
      write_manifest(g, args, bbox, domain_f.empty() ? std::vector<std::string>{path_f}
                                                     : std::vector<std::string>{domain_f, path_f});
    } else if (reduce->parsed()) {
      const PlanarDomain d = load_domain();
      const Polyline p = load_path(path_f);
      const CutSystem cuts = build_cut_system(d, g.seed);
      print_path(reduce_direction(d, p, angle, cuts, solver_options(d, g)));
      write_manifest(g, args, d.bbox(), {domain_f, path_f});
    } else if (geo->parsed()) {
      const PlanarDomain d = load_domain();
      const Polyline p = load_path(path_f);
      const CutSystem cuts = build_cut_system(d, g.seed);
      const auto sched = make_schedule(g.schedule_n, d.bbox());
      try {
        const auto r = oscillatory_geodesic(d, p, sched, cuts, solver_options(d, g));
        std::cout << "# sweeps " << r.report.sweeps << " replacements " << r.report.replacements << '\n'
                  << "# initial_T " << io::num(r.report.initial_T) << " final_T " << io::num(r.report.final_T)
                  << " converged " << boolstr(r.report.converged) << '\n';
        print_path(r.path.geometry());
        if (!svg_f.empty())
          io::emit_svg(d, {{p, "#888888", 1.0}, {r.path.geometry(), "#d62728", 3.0}}, svg_f);
      } catch (const GeodesicNonConvergence& e) {
        std::cout << "# not converged after " << e.report().sweeps << " sweeps; best path follows\n";
        print_path(e.best());
        throw;
      }
      write_manifest(g, args, d.bbox(), {domain_f, path_f});
    } else if (homotopic->parsed()) {
      const PlanarDomain d = load_domain();
      const CutSystem cuts = build_cut_system(d, g.seed);
      std::cout << boolstr(is_homotopic_rel_endpoints(d, load_path(path_f), load_path(path2_f), cuts)) << '\n';
      write_manifest(g, args, d.bbox(), {domain_f, path_f, path2_f});
    } else if (nullh->parsed()) {
      const PlanarDomain d = load_domain();
      const CutSystem cuts = build_cut_system(d, g.seed);
      std::cout << boolstr(is_nullhomotopic(d, load_path(path_f), cuts)) << '\n';
      write_manifest(g, args, d.bbox(), {domain_f, path_f});
    } else if (oracle->parsed()) {
      const PlanarDomain d = load_domain();
      const Polyline p = load_path(path_f);
      const CutSystem cuts = build_cut_system(d, g.seed);
      const Polyline out = shortest_homotopic_path(d, p, cuts);
      print_path(out);
      if (!svg_f.empty()) io::emit_svg(d, {{p, "#888888", 1.0}, {out, "#2ca02c", 3.0}}, svg_f);
      write_manifest(g, args, d.bbox(), {domain_f, path_f});
    } else if (greduce->parsed()) {
      const EmbeddedGraph graph = io::parse_graph(io::load_json(graph_f), graph_f);
      const EdgePath p = io::parse_edge_path(io::load_json(epath_f), graph, epath_f);
      BBox bbox = BBox::of(graph.vertices());
      for (const auto& e : graph.edges())
        for (Point q : e.geometry.vertices()) {
          bbox.xmin = std::min(bbox.xmin, q.x);
          bbox.xmax = std::max(bbox.xmax, q.x);
          bbox.ymin = std::min(bbox.ymin, q.y);
          bbox.ymax = std::max(bbox.ymax, q.y);
        }
      if (bbox.degenerate()) bbox = path_bbox(Polyline(graph.vertices()));
      const auto r = graph_oscillatory_geodesic(graph, p, make_schedule(g.schedule_n, bbox), 50, g.seed);
      std::cout << "start " << r.reduced.start << '\n';
      for (Step s : r.reduced.steps) std::cout << "step " << s.edge << ' ' << (s.dir > 0 ? "+1" : "-1") << '\n';
      std::cout << "T " << io::num(r.total) << '\n';
      for (Point q : r.geometry.vertices()) std::cout << "point " << io::num(q.x) << ' ' << io::num(q.y) << '\n';
      write_manifest(g, args, bbox, {graph_f, epath_f});
    } else if (maph->parsed()) {
      const PlanarDomain d = load_domain();
      const MapSpec f = io::parse_map_spec(io::load_json(f_f), f_f);
      const MapSpec gm = io::parse_map_spec(io::load_json(g_f), g_f);
      const Polyline alpha = load_path(alpha_f);
      const CutSystem cuts = build_cut_system(d, g.seed);
      const auto sched = make_schedule(g.schedule_n, d.bbox());
      const auto h = build_homotopy(d, f, gm, alpha, sched, cuts, samples, steps, solver_options(d, g));
      std::cout << "# samples " << h.points.size() << " steps " << h.times.size() - 1 << " max_adjacent "
                << io::num(max_adjacent_distance(h)) << '\n';
      for (std::size_t y = 0; y < h.grid.size(); ++y)
        for (std::size_t j = 0; j < h.grid[y].size(); ++j)
          std::cout << y << ' ' << j << ' ' << io::num(h.grid[y][j].x) << ' ' << io::num(h.grid[y][j].y) << '\n';
      if (!frames_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(frames_dir, ec);
        if (ec) throw IoError("cannot create " + frames_dir);
        std::vector<io::SvgLayer> layers;
        for (const auto& e : f.edge_images) layers.push_back({e, "#1f77b4", 1.0});
        for (const auto& e : gm.edge_images) layers.push_back({e, "#ff7f0e", 1.0});
        for (std::size_t j = 0; j < h.times.size(); ++j) {
          std::vector<Point> dots;
          for (const auto& row : h.grid) dots.push_back(row[j]);
          char name[32];
          std::snprintf(name, sizeof name, "frame_%04zu.svg", j);
          io::write_file((std::filesystem::path(frames_dir) / name).string(), io::svg(d, layers, dots));
        }
      }
      write_manifest(g, args, d.bbox(), {domain_f, f_f, g_f, alpha_f});
    } else if (probe->parsed()) {
      const PlanarDomain d = load_domain();
      const Polyline p = load_path(path_f);
      const CutSystem cuts = build_cut_system(d, g.seed);
      const auto sched = make_schedule(g.schedule_n, d.bbox());
      for (const auto& row : continuity_probe(d, p, sched, cuts, deltas, trials, g.seed, solver_options(d, g)))
        std::cout << io::num(row.delta) << ' ' << io::num(row.epsilon) << '\n';
      write_manifest(g, args, d.bbox(), {domain_f, path_f});
    }
  } catch (const Error& e) {
    std::cerr << "osc: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "osc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
