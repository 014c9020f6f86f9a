#ifndef OSC_MAPS_HPP
#define OSC_MAPS_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "osc/error.hpp"
#include "osc/geodesic.hpp"
#include "osc/geom.hpp"
#include "osc/homotopy.hpp"
#include "osc/oracle.hpp"
#include "osc/oscillation.hpp"

namespace osc {

/// Piecewise-linear map from a graph into a planar domain, given by the
/// image of every vertex and edge.  Edge parameters correspond by
/// normalized arc length.
struct MapSpec {
  EmbeddedGraph source;
  std::vector<Point> vertex_images;
  std::vector<Polyline> edge_images;

  void validate(const PlanarDomain& domain) const {
    if (vertex_images.size() != source.vertex_count())
      throw GeometryError("map has " + std::to_string(vertex_images.size()) + " vertex images for " +
                          std::to_string(source.vertex_count()) + " vertices");
    if (edge_images.size() != source.edge_count())
      throw GeometryError("map has " + std::to_string(edge_images.size()) + " edge images for " +
                          std::to_string(source.edge_count()) + " edges");
    for (std::size_t e = 0; e < edge_images.size(); ++e) {
      const auto& edge = source.edges()[e];
      if (!(edge_images[e].front() == vertex_images[edge.u]) || !(edge_images[e].back() == vertex_images[edge.v]))
        throw GeometryError("image of edge " + std::to_string(e) + " does not join its vertex images");
    }
    const double tol = domain.tolerance();
    for (std::size_t e = 0; e < edge_images.size(); ++e) {
      const auto& pts = edge_images[e].vertices();
      for (Point p : pts)
        if (!contains_point_tol(domain, p, tol))
          throw GeometryError("image of edge " + std::to_string(e) + " leaves the domain");
      for (std::size_t i = 1; i < pts.size(); ++i)
        if (!chord_in_domain(domain, pts[i - 1], pts[i], tol))
          throw GeometryError("image of edge " + std::to_string(e) + " leaves the domain");
    }
  }
};

/// A point of the source graph: a vertex (edge < 0) or the point at
/// normalized arc length `t` along an edge.
struct SourcePoint {
  int edge = -1;
  int vertex = 0;
  double t = 0.0;
};

inline Polyline edge_image_prefix(const MapSpec& f, int edge, double t) {
  const Polyline& img = f.edge_images[edge];
  if (t <= 0.0) return Polyline({img.front()});
  if (t >= 1.0) return img;
  return img.prefix(t * img.length());
}

inline Point image_of(const MapSpec& f, const SourcePoint& y) {
  if (y.edge < 0) return f.vertex_images[y.vertex];
  const Polyline& img = f.edge_images[y.edge];
  if (y.t <= 0.0) return img.front();
  if (y.t >= 1.0) return img.back();
  return img.at_arclength(y.t * img.length());
}

/// Image of an edge path under a map.
inline Polyline image_of(const MapSpec& f, const EdgePath& p) {
  validate_edge_path(f.source, p);
  std::vector<Point> pts{f.vertex_images[p.start]};
  for (Step s : p.steps) {
    const auto& g = f.edge_images[s.edge].vertices();
    if (s.dir > 0) pts.insert(pts.end(), g.begin() + 1, g.end());
    else pts.insert(pts.end(), g.rbegin() + 1, g.rend());
  }
  return Polyline(std::move(pts));
}

/// Path in the source from a vertex along a walk, then a fraction of one
/// more edge (its tail must be the walk's end).
struct SourcePath {
  EdgePath walk;
  SourcePoint end;  // vertex end or a partial edge leaving end_vertex(walk)
};

inline Polyline image_of(const MapSpec& f, const SourcePath& beta) {
  Polyline p = image_of(f, beta.walk);
  if (beta.end.edge < 0) {
    if (beta.end.vertex != end_vertex(f.source, beta.walk)) throw PreconditionError("source path does not end at its target");
    return p;
  }
  const auto& edge = f.source.edges()[beta.end.edge];
  if (edge.u != end_vertex(f.source, beta.walk)) throw PreconditionError("partial edge does not continue the source path");
  const Polyline tail = edge_image_prefix(f, beta.end.edge, beta.end.t);
  return p.then(tail);
}

/// Class of the conjugated loop alpha^-1 * s * alpha.
inline CrossingWord change_of_basepoint(const Polyline& alpha, const Polyline& s, const CutSystem& cuts) {
  if (!s.is_closed() || !(s.front() == alpha.front()))
    throw PreconditionError("loop is not based at the start of the path");
  return reduced_word(alpha.reversed().then(s).then(alpha), cuts);
}

/// Breadth-first spanning tree from `root`, lowest edge index first:
/// parent step into each vertex (edge, dir) or (-1, 0) for the root.
inline std::vector<Step> spanning_tree(const EmbeddedGraph& g, int root = 0) {
  std::vector<Step> parent(g.vertex_count(), Step{-1, 0});
  std::vector<bool> seen(g.vertex_count(), false);
  std::deque<int> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (auto [e, dir] : g.incident(v)) {
      const int w = g.head(e, dir);
      if (seen[w]) continue;
      seen[w] = true;
      parent[w] = Step{e, dir};
      queue.push_back(w);
    }
  }
  return parent;
}

inline EdgePath tree_path(const EmbeddedGraph& g, const std::vector<Step>& parent, int root, int target) {
  EdgePath p{root, {}};
  for (int v = target; v != root;) {
    const Step s = parent[v];
    p.steps.push_back(s);
    v = g.tail(s.edge, s.dir);
  }
  std::reverse(p.steps.begin(), p.steps.end());
  return p;
}

/// Generators of the source's fundamental group at `root`: one loop per
/// non-tree edge.
inline std::vector<EdgePath> fundamental_cycles(const EmbeddedGraph& g, int root = 0) {
  const auto parent = spanning_tree(g, root);
  std::vector<bool> in_tree(g.edge_count(), false);
  for (const Step& s : parent)
    if (s.edge >= 0) in_tree[s.edge] = true;
  std::vector<EdgePath> out;
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
    if (in_tree[e]) continue;
    EdgePath p = tree_path(g, parent, root, g.edges()[e].u);
    p.steps.push_back({e, 1});
    EdgePath back = tree_path(g, parent, root, g.edges()[e].v);
    for (auto it = back.steps.rbegin(); it != back.steps.rend(); ++it) p.steps.push_back({it->edge, -it->dir});
    out.push_back(reduce_edge_path(g, p));
  }
  return out;
}

/// Whether [f o c] equals the change of basepoint along alpha of [g o c]
/// for every fundamental cycle c at `base`.  alpha runs from g(base) to f(base).
inline bool check_conjugate_by_path(const PlanarDomain& domain, const MapSpec& f, const MapSpec& g,
                                    const Polyline& alpha, const CutSystem& cuts, int base = 0) {
  (void)domain;
  if (f.source.vertex_count() != g.source.vertex_count() || f.source.edge_count() != g.source.edge_count())
    throw PreconditionError("maps do not share a source graph");
  if (!(alpha.front() == g.vertex_images[base]) || !(alpha.back() == f.vertex_images[base]))
    throw PreconditionError("alpha must run from g(y0) to f(y0)");
  for (const EdgePath& c : fundamental_cycles(f.source, base)) {
    const CrossingWord wf = reduced_word(image_of(f, c), cuts);
    const CrossingWord wg = change_of_basepoint(alpha, image_of(g, c), cuts);
    if (!(wf == wg)) return false;
  }
  return true;
}

/// f o beta^-1 * alpha^-1 * g o beta, a path from f(y) to g(y).  alpha runs
/// from g(y0) to f(y0) and beta from y0 to y.
inline Polyline induced_path(const MapSpec& f, const MapSpec& g, const Polyline& alpha, const SourcePath& beta) {
  const Polyline fb = image_of(f, beta);
  const Polyline gb = image_of(g, beta);
  if (!(fb.front() == alpha.back()) || !(gb.front() == alpha.front()))
    throw PreconditionError("alpha does not join the images of the source path's start");
  return fb.reversed().then(alpha.reversed()).then(gb).normalized();
}

struct SampledHomotopy {
  std::vector<SourcePoint> points;
  std::vector<double> times;               // t_0 = 0, ..., t_m = 1
  std::vector<std::vector<Point>> grid;    // grid[y][j] = F(y, t_j)
  std::vector<std::pair<int, int>> neighbours;  // consecutive samples along an edge
  std::vector<double> totals;              // T of each sample's geodesic
};

/// Vertices followed by interior arc-length samples of each edge; an edge
/// gets a share of `samples` proportional to its length (at least one piece).
inline std::vector<SourcePoint> source_samples(const EmbeddedGraph& g, int samples,
                                               std::vector<std::pair<int, int>>* neighbours = nullptr) {
  std::vector<SourcePoint> pts;
  for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) pts.push_back({-1, v, 0.0});
  double total = 0.0;
  for (const auto& e : g.edges()) total += e.geometry.length();
  for (int e = 0; e < static_cast<int>(g.edge_count()); ++e) {
    const auto& edge = g.edges()[e];
    const int pieces = std::max(1, static_cast<int>(std::lround(samples * edge.geometry.length() / total)));
    int prev = edge.u;
    for (int k = 1; k < pieces; ++k) {
      pts.push_back({e, edge.u, static_cast<double>(k) / pieces});
      if (neighbours) neighbours->emplace_back(prev, static_cast<int>(pts.size()) - 1);
      prev = static_cast<int>(pts.size()) - 1;
    }
    if (neighbours) neighbours->emplace_back(prev, edge.v);
  }
  return pts;
}

/// F(y, t) = a_y(min(T(a_y), t)) with a_y the oscillatory geodesic in the
/// class of the induced path at y.  Rows t = 0 and t = 1 are f and g exactly.
inline SampledHomotopy build_homotopy(const PlanarDomain& domain, const MapSpec& f, const MapSpec& g,
                                      const Polyline& alpha, const DirectionSchedule& schedule, const CutSystem& cuts,
                                      int samples, int steps, const SolverOptions& opts = {}, int base = 0) {
  if (samples < 1 || steps < 1) throw PreconditionError("samples and steps must be positive");
  f.validate(domain);
  g.validate(domain);
  if (!check_conjugate_by_path(domain, f, g, alpha, cuts, base))
    throw ConjugacyError("maps are not conjugate by the given path");

  SampledHomotopy out;
  out.points = source_samples(f.source, samples, &out.neighbours);
  for (int j = 0; j <= steps; ++j) out.times.push_back(static_cast<double>(j) / steps);
  const auto parent = spanning_tree(f.source, base);

  std::map<std::tuple<double, double, double, double, std::vector<Letter>>, ParamPath> cache;
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    const SourcePoint& y = out.points[k];
    const int v = y.edge < 0 ? y.vertex : f.source.edges()[y.edge].u;
    SourcePath beta{tree_path(f.source, parent, base, v), y};
    const Polyline path = induced_path(f, g, alpha, beta);
    const Point fy = image_of(f, y), gy = image_of(g, y);
    const auto key = std::make_tuple(fy.x, fy.y, gy.x, gy.y, reduced_word(path, cuts).letters());
    auto it = cache.find(key);
    if (it == cache.end()) {
      ParamPath geo;
      try {
        geo = oscillatory_geodesic(domain, path, schedule, cuts, opts).path;
      } catch (const NonConvergenceError& e) {
        throw NonConvergenceError("geodesic for sample " + std::to_string(k) + " did not converge: " + e.what());
      }
      it = cache.emplace(key, std::move(geo)).first;
    }
    const ParamPath& a = it->second;
    std::vector<Point> row;
    row.reserve(out.times.size());
    for (double t : out.times) {
      if (t == 0.0) row.push_back(fy);
      else if (t >= a.total()) row.push_back(gy);
      else row.push_back(a.at_T(t));
    }
    out.grid.push_back(std::move(row));
    out.totals.push_back(a.total());
  }
  return out;
}

/// Largest distance between grid entries adjacent in time or along the source.
inline double max_adjacent_distance(const SampledHomotopy& h) {
  double m = 0.0;
  for (const auto& row : h.grid)
    for (std::size_t j = 1; j < row.size(); ++j) m = std::max(m, dist(row[j - 1], row[j]));
  for (auto [a, b] : h.neighbours)
    for (std::size_t j = 0; j < h.grid[a].size(); ++j) m = std::max(m, dist(h.grid[a][j], h.grid[b][j]));
  return m;
}

}  // namespace osc

#endif  // OSC_MAPS_HPP
