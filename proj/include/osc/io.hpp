#ifndef OSC_IO_HPP
#define OSC_IO_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "osc/error.hpp"
#include "osc/geom.hpp"
#include "osc/maps.hpp"
#include "osc/oracle.hpp"
#include "osc/oscillation.hpp"

namespace osc::io {

using json = nlohmann::json;

/// Fixed-locale decimal with 12 significant digits.
inline std::string num(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

inline json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(what + ": malformed JSON: " + e.what());
  }
}

inline json load_json(const std::string& path) { return parse_json(read_file(path), path); }

inline Point parse_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw IoError(where + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Point> parse_points(const json& j, const std::string& where) {
  if (!j.is_array()) throw IoError(where + ": expected a list of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_point(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw IoError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

inline PlanarDomain parse_domain(const json& j, const std::string& where = "domain") {
  auto outer = parse_points(field(j, "outer", where), where + ".outer");
  std::vector<std::vector<Point>> holes;
  if (j.contains("holes")) {
    const json& hs = j.at("holes");
    if (!hs.is_array()) throw IoError(where + ".holes: expected a list of polygons");
    for (std::size_t i = 0; i < hs.size(); ++i)
      holes.push_back(parse_points(hs[i], where + ".holes[" + std::to_string(i) + "]"));
  }
  return PlanarDomain(std::move(outer), std::move(holes));
}

inline Polyline parse_path(const json& j, const std::string& where = "path") {
  auto pts = parse_points(field(j, "points", where), where + ".points");
  if (pts.empty()) throw GeometryError(where + ": path has no points");
  return Polyline(std::move(pts));
}

inline EmbeddedGraph parse_graph(const json& j, const std::string& where = "graph") {
  auto vertices = parse_points(field(j, "vertices", where), where + ".vertices");
  const json& es = field(j, "edges", where);
  if (!es.is_array()) throw IoError(where + ".edges: expected a list");
  std::vector<GraphEdge> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string w = where + ".edges[" + std::to_string(i) + "]";
    const json& e = es[i];
    if (!field(e, "u", w).is_number_integer() || !field(e, "v", w).is_number_integer())
      throw IoError(w + ": endpoints must be integers");
    GraphEdge ge;
    ge.u = e.at("u").get<int>();
    ge.v = e.at("v").get<int>();
    if (ge.u < 0 || ge.v < 0 || ge.u >= static_cast<int>(vertices.size()) || ge.v >= static_cast<int>(vertices.size()))
      throw GeometryError(w + ": endpoint index out of range");
    if (e.contains("geometry")) ge.geometry = Polyline(parse_points(e.at("geometry"), w + ".geometry"));
    else ge.geometry = Polyline({vertices[ge.u], vertices[ge.v]});
    edges.push_back(std::move(ge));
  }
  return EmbeddedGraph(std::move(vertices), std::move(edges));
}

inline EdgePath parse_edge_path(const json& j, const EmbeddedGraph& g, const std::string& where = "edge-path") {
  const json& steps = field(j, "steps", where);
  if (!steps.is_array()) throw IoError(where + ".steps: expected a list");
  EdgePath p;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const json& s = steps[i];
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
      throw IoError(where + ".steps[" + std::to_string(i) + "]: expected [edge, +-1]");
    p.steps.push_back({s[0].get<int>(), s[1].get<int>()});
  }
  if (j.contains("start")) {
    p.start = j.at("start").get<int>();
  } else if (!p.steps.empty()) {
    const Step s = p.steps.front();
    if (s.edge < 0 || s.edge >= static_cast<int>(g.edge_count())) throw PreconditionError(where + ": unknown edge");
    p.start = g.tail(s.edge, s.dir);
  }
  validate_edge_path(g, p);
  return p;
}

inline MapSpec parse_map_spec(const json& j, const std::string& where = "map") {
  MapSpec m;
  m.source = parse_graph(field(j, "graph", where), where + ".graph");
  m.vertex_images = parse_points(field(j, "vertex_images", where), where + ".vertex_images");
  const json& es = field(j, "edge_images", where);
  if (!es.is_array()) throw IoError(where + ".edge_images: expected a list");
  for (std::size_t i = 0; i < es.size(); ++i)
    m.edge_images.emplace_back(parse_points(es[i], where + ".edge_images[" + std::to_string(i) + "]"));
  return m;
}

inline json to_json(const Polyline& p) {
  json pts = json::array();
  for (Point q : p.vertices()) pts.push_back({q.x, q.y});
  return json{{"points", pts}};
}

inline json to_json(const PlanarDomain& d) {
  auto ring = [](const std::vector<Point>& r) {
    json a = json::array();
    for (Point q : r) a.push_back({q.x, q.y});
    return a;
  };
  json holes = json::array();
  for (const auto& h : d.holes()) holes.push_back(ring(h));
  return json{{"outer", ring(d.outer())}, {"holes", holes}};
}

struct SvgLayer {
  Polyline path;
  std::string stroke = "#1f77b4";
  double width = 1.0;
};

/// SVG with the domain filled, holes cut out, then each layer in order.
/// The y axis is flipped so the picture matches the plane.
inline std::string svg(const PlanarDomain& domain, const std::vector<SvgLayer>& layers,
                       const std::vector<Point>& dots = {}) {
  const BBox b = domain.bbox();
  const double pad = 0.05 * std::max(b.width(), b.height());
  const double x0 = b.xmin - pad, y0 = b.ymin - pad, w = b.width() + 2 * pad, h = b.height() + 2 * pad;
  const double unit = std::max(w, h) / 500.0;
  auto pt = [&](Point p) { return num(p.x) + "," + num(y0 + y0 + h - p.y); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(x0) << ' ' << num(y0) << ' ' << num(w) << ' '
     << num(h) << "\" width=\"500\" height=\"" << num(500.0 * h / w) << "\">\n";
  os << "<path fill=\"#eeeeee\" fill-rule=\"evenodd\" stroke=\"#333333\" stroke-width=\"" << num(unit) << "\" d=\"";
  auto ring = [&](const std::vector<Point>& r) {
    os << 'M';
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " L" : "") << pt(r[i]);
    os << " Z ";
  };
  ring(domain.outer());
  for (const auto& hole : domain.holes()) ring(hole);
  os << "\"/>\n";
  for (const auto& layer : layers) {
    os << "<polyline fill=\"none\" stroke=\"" << layer.stroke << "\" stroke-width=\"" << num(layer.width * unit)
       << "\" stroke-linejoin=\"round\" points=\"";
    for (std::size_t i = 0; i < layer.path.size(); ++i) os << (i ? " " : "") << pt(layer.path[i]);
    os << "\"/>\n";
  }
  for (Point p : dots) os << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(y0 + y0 + h - p.y) << "\" r=\"" << num(1.5 * unit) << "\" fill=\"#d62728\"/>\n";
  os << "</svg>\n";
  return os.str();
}

inline void emit_svg(const PlanarDomain& domain, const std::vector<SvgLayer>& layers, const std::string& out) {
  write_file(out, svg(domain, layers));
}

/// 64-bit FNV-1a, hex encoded.
inline std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline constexpr const char* kVersion = "osc 0.1.0";

struct RunManifest {
  std::vector<std::string> argv;
  int schedule_n = 64;
  BBox bbox{};
  double tol = kEpsGeom;
  int max_sweeps = 200;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // file, digest

  void add_input(const std::string& path) { inputs.emplace_back(path, digest(read_file(path))); }

  json to_json() const {
    json files = json::array();
    for (const auto& [f, d] : inputs) files.push_back({{"file", f}, {"fnv1a64", d}});
    return json{{"version", kVersion},
                {"command", argv},
                {"schedule", {{"n", schedule_n}, {"bbox", {bbox.xmin, bbox.ymin, bbox.xmax, bbox.ymax}}}},
                {"tolerances", {{"eps_geom", tol}, {"eps_angle", 1e-7}, {"tol_param", 1e-6}}},
                {"max_sweeps", max_sweeps},
                {"seed", seed},
                {"inputs", files}};
  }
};

}  // namespace osc::io

#endif  // OSC_IO_HPP
