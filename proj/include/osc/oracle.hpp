#ifndef OSC_ORACLE_HPP
#define OSC_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "osc/error.hpp"
#include "osc/geodesic.hpp"
#include "osc/geom.hpp"
#include "osc/homotopy.hpp"
#include "osc/oscillation.hpp"
#include "osc/triangulate.hpp"

namespace osc {

namespace detail {

inline int locate_triangle(const Triangulation& tri, Point p) {
  for (int t = 0; t < static_cast<int>(tri.triangles.size()); ++t)
    if (tri.contains(t, p)) return t;
  // Boundary points can miss by rounding; take the nearest triangle.
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int t = 0; t < static_cast<int>(tri.triangles.size()); ++t) {
    double d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) d = std::min(d, point_segment_distance(p, tri.corner(t, k), tri.corner(t, (k + 1) % 3)));
    if (d < best_d) {
      best_d = d;
      best = t;
    }
  }
  return best;
}

inline Point edge_midpoint(const Triangulation& tri, int t, int k) {
  return lerp(tri.corner(t, k), tri.corner(t, (k + 1) % 3), 0.5);
}

// Letters of the dual edge centroid(t) -> midpoint -> centroid(u).
inline std::vector<Letter> dual_letters(const Triangulation& tri, const CutSystem& cuts, int t, int k) {
  const int u = tri.neighbors[t][k];
  const Point pts[3] = {tri.centroid(t), edge_midpoint(tri, t, k), tri.centroid(u)};
  return crossing_word_unchecked(pts, cuts).letters();
}

// Shortest dual path in the universal cover from (ts, empty word) to
// (te, target), keeping only words within `slack` letters of the target's
// prefixes.
inline std::vector<int> sleeve_search(const Triangulation& tri, const CutSystem& cuts, int ts, int te,
                                      const CrossingWord& target, std::size_t slack) {
  const auto& W = target.letters();
  struct State {
    int tri;
    std::vector<Letter> word;
    int parent;
  };
  std::vector<State> states;
  std::map<std::pair<int, std::vector<Letter>>, int> seen;
  std::deque<int> queue;
  states.push_back({ts, {}, -1});
  seen[{ts, {}}] = 0;
  queue.push_back(0);
  auto admissible = [&](const std::vector<Letter>& w) {
    std::size_t lcp = 0;
    while (lcp < w.size() && lcp < W.size() && w[lcp] == W[lcp]) ++lcp;
    return w.size() - lcp <= slack;
  };
  while (!queue.empty()) {
    const int si = queue.front();
    queue.pop_front();
    if (states[si].tri == te && states[si].word == W) {
      std::vector<int> seq;
      for (int s = si; s >= 0; s = states[s].parent) seq.push_back(states[s].tri);
      std::reverse(seq.begin(), seq.end());
      return seq;
    }
    for (int k = 0; k < 3; ++k) {
      const int u = tri.neighbors[states[si].tri][k];
      if (u < 0) continue;
      std::vector<Letter> w = states[si].word;
      for (Letter l : dual_letters(tri, cuts, states[si].tri, k)) {
        if (!w.empty() && CrossingWord::cancels(w.back(), l)) w.pop_back();
        else w.push_back(l);
      }
      if (!admissible(w)) continue;
      auto key = std::make_pair(u, w);
      if (seen.count(key)) continue;
      seen.emplace(key, static_cast<int>(states.size()));
      states.push_back({u, std::move(w), si});
      queue.push_back(static_cast<int>(states.size()) - 1);
    }
  }
  return {};
}

// Drops interior points lying exactly on the segment between their neighbours.
inline std::vector<Point> remove_collinear(const std::vector<Point>& in) {
  std::vector<Point> out;
  for (Point p : in) {
    if (!out.empty() && out.back() == p) continue;
    while (out.size() >= 2) {
      const Point a = out[out.size() - 2], b = out.back();
      if (orient(a, b, p) == 0 && dot(b - a, p - b) >= 0.0) out.pop_back();
      else break;
    }
    out.push_back(p);
  }
  return out;
}

// Simple stupid funnel over (left, right) portals.
inline std::vector<Point> funnel(const std::vector<std::pair<Point, Point>>& portals) {
  std::vector<Point> out;
  Point apex = portals[0].first, left = portals[0].first, right = portals[0].second;
  std::size_t apex_i = 0, left_i = 0, right_i = 0;
  out.push_back(apex);
  for (std::size_t i = 1; i < portals.size(); ++i) {
    const Point L = portals[i].first, R = portals[i].second;
    if (orient(apex, right, R) >= 0) {
      if (apex == right || orient(apex, left, R) < 0) {
        right = R;
        right_i = i;
      } else {
        apex = left;
        apex_i = left_i;
        out.push_back(apex);
        left = right = apex;
        left_i = right_i = apex_i;
        i = apex_i;
        continue;
      }
    }
    if (orient(apex, left, L) <= 0) {
      if (apex == left || orient(apex, right, L) > 0) {
        left = L;
        left_i = i;
      } else {
        apex = right;
        apex_i = right_i;
        out.push_back(apex);
        left = right = apex;
        left_i = right_i = apex_i;
        i = apex_i;
        continue;
      }
    }
  }
  out.push_back(portals.back().first);
  return out;
}

}  // namespace detail

/// Euclidean-shortest path homotopic rel endpoints to `path`: the triangle
/// sleeve of its class in the universal cover, then the funnel through it.
inline Polyline shortest_homotopic_path(const PlanarDomain& domain, const Polyline& path, const CutSystem& cuts,
                                        const Triangulation* triangulation = nullptr) {
  const Polyline p = path.normalized();
  const Point s = p.front(), e = p.back();
  if (p.size() == 1) return p;
  Triangulation local;
  if (!triangulation) local = triangulate(domain);
  const Triangulation& tri = triangulation ? *triangulation : local;
  const int ts = detail::locate_triangle(tri, s), te = detail::locate_triangle(tri, e);
  if (ts < 0 || te < 0) throw GeometryError("path endpoint outside the triangulation");

  std::vector<Point> lifted{tri.centroid(ts)};
  for (Point q : p.vertices()) lifted.push_back(q);
  lifted.push_back(tri.centroid(te));
  const CrossingWord target = free_reduce(crossing_word_unchecked(lifted, cuts));

  std::vector<int> seq;
  for (std::size_t slack : {2u, 4u, 8u}) {
    seq = detail::sleeve_search(tri, cuts, ts, te, target, slack);
    if (!seq.empty()) break;
  }
  if (seq.empty()) throw GeometryError("sleeve extraction failed");

  std::vector<std::pair<Point, Point>> portals{{s, s}};
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const int k = tri.shared_edge(seq[i], seq[i + 1]);
    const Point right = tri.corner(seq[i], k), left = tri.corner(seq[i], (k + 1) % 3);
    portals.emplace_back(left, right);
  }
  portals.emplace_back(e, e);
  Polyline out(detail::remove_collinear(detail::funnel(portals)));
  if (!(free_reduce(crossing_word_unchecked(out.vertices(), cuts)) == reduced_word(p, cuts)))
    throw GeometryError("funnel output left the homotopy class of the input");
  return out;
}

/// Finite graph drawn in the plane; edge i runs from vertices[u] to
/// vertices[v] along `geometry`.
struct GraphEdge {
  int u = 0;
  int v = 0;
  Polyline geometry;
};

class EmbeddedGraph {
public:
  EmbeddedGraph() = default;
  EmbeddedGraph(std::vector<Point> vertices, std::vector<GraphEdge> edges)
      : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    validate();
  }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Edges incident to a vertex as (edge, orientation leaving the vertex).
  std::vector<std::pair<int, int>> incident(int v) const {
    std::vector<std::pair<int, int>> out;
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      if (edges_[e].u == v) out.emplace_back(e, 1);
      if (edges_[e].v == v) out.emplace_back(e, -1);
    }
    return out;
  }

  int tail(int e, int dir) const { return dir > 0 ? edges_[e].u : edges_[e].v; }
  int head(int e, int dir) const { return dir > 0 ? edges_[e].v : edges_[e].u; }

private:
  void validate() {
    const int n = static_cast<int>(vertices_.size());
    if (n == 0) throw GeometryError("graph has no vertices");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
        throw GeometryError("edge " + std::to_string(i) + " references a missing vertex");
      if (!(e.geometry.front() == vertices_[e.u]) || !(e.geometry.back() == vertices_[e.v]))
        throw GeometryError("edge " + std::to_string(i) + " geometry does not join its endpoints");
      if (e.geometry.normalized().size() < 2) throw GeometryError("edge " + std::to_string(i) + " is degenerate");
    }
    for (std::size_t i = 0; i < edges_.size(); ++i)
      for (std::size_t j = i + 1; j < edges_.size(); ++j)
        if (edges_meet_improperly(i, j))
          throw GeometryError("edges " + std::to_string(i) + " and " + std::to_string(j) + " cross");
    std::vector<int> comp(n, -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& e : edges_)
        for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}})
          if (a == v && comp[b] < 0) {
            comp[b] = 0;
            stack.push_back(b);
          }
    }
    if (std::count(comp.begin(), comp.end(), -1) > 0) throw GeometryError("graph is not connected");
  }

  bool edges_meet_improperly(std::size_t i, std::size_t j) const {
    const auto& a = edges_[i].geometry.vertices();
    const auto& b = edges_[j].geometry.vertices();
    std::vector<Point> shared;
    for (int x : {edges_[i].u, edges_[i].v})
      for (int y : {edges_[j].u, edges_[j].v})
        if (x == y) shared.push_back(vertices_[x]);
    for (std::size_t p = 1; p < a.size(); ++p)
      for (std::size_t q = 1; q < b.size(); ++q) {
        if (!segments_intersect(a[p - 1], a[p], b[q - 1], b[q])) continue;
        // Allowed only as a touch at a shared endpoint vertex.
        bool ok = false;
        for (Point sv : shared) {
          const bool on_a = a[p - 1] == sv || a[p] == sv;
          const bool on_b = b[q - 1] == sv || b[q] == sv;
          if (!on_a || !on_b) continue;
          const Point ao = a[p - 1] == sv ? a[p] : a[p - 1];
          const Point bo = b[q - 1] == sv ? b[q] : b[q - 1];
          if (!(orient(sv, ao, bo) == 0 && dot(ao - sv, bo - sv) > 0.0)) ok = true;
        }
        if (!ok) return true;
      }
    return false;
  }

  std::vector<Point> vertices_;
  std::vector<GraphEdge> edges_;
};

struct Step {
  int edge = 0;
  int dir = 1;
  friend bool operator==(Step, Step) = default;
};

/// Walk in a graph: a start vertex and a sequence of oriented edges.
struct EdgePath {
  int start = 0;
  std::vector<Step> steps;
  friend bool operator==(const EdgePath&, const EdgePath&) = default;
};

inline int end_vertex(const EmbeddedGraph& g, const EdgePath& p) {
  return p.steps.empty() ? p.start : g.head(p.steps.back().edge, p.steps.back().dir);
}

inline void validate_edge_path(const EmbeddedGraph& g, const EdgePath& p) {
  if (p.start < 0 || p.start >= static_cast<int>(g.vertex_count())) throw PreconditionError("edge path start is not a vertex");
  int at = p.start;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const Step s = p.steps[i];
    if (s.edge < 0 || s.edge >= static_cast<int>(g.edge_count()) || (s.dir != 1 && s.dir != -1))
      throw PreconditionError("step " + std::to_string(i) + " is not an oriented edge");
    if (g.tail(s.edge, s.dir) != at) throw PreconditionError("step " + std::to_string(i) + " does not continue the path");
    at = g.head(s.edge, s.dir);
  }
}

/// Cancels every step immediately followed by its own reverse (single stack pass).
inline EdgePath reduce_edge_path(const EmbeddedGraph& g, const EdgePath& p) {
  validate_edge_path(g, p);
  EdgePath out{p.start, {}};
  for (Step s : p.steps) {
    if (!out.steps.empty() && out.steps.back().edge == s.edge && out.steps.back().dir == -s.dir) out.steps.pop_back();
    else out.steps.push_back(s);
  }
  return out;
}

inline Polyline edge_path_geometry(const EmbeddedGraph& g, const EdgePath& p) {
  std::vector<Point> pts{g.vertices()[p.start]};
  for (Step s : p.steps) {
    const auto& geom = g.edges()[s.edge].geometry.vertices();
    if (s.dir > 0) pts.insert(pts.end(), geom.begin() + 1, geom.end());
    else pts.insert(pts.end(), geom.rbegin() + 1, geom.rend());
  }
  return Polyline(std::move(pts));
}

/// Inserts `count` cancelling spurs e*e^-1 at random positions.
inline EdgePath inflate_with_spurs(const EmbeddedGraph& g, const EdgePath& p, int count, std::mt19937_64& rng) {
  EdgePath out = p;
  for (int k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pos(0, out.steps.size());
    const std::size_t at = pos(rng);
    const int v = at == 0 ? out.start : g.head(out.steps[at - 1].edge, out.steps[at - 1].dir);
    const auto inc = g.incident(v);
    if (inc.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, inc.size() - 1);
    const auto [e, dir] = inc[pick(rng)];
    out.steps.insert(out.steps.begin() + static_cast<std::ptrdiff_t>(at), {Step{e, dir}, Step{e, -dir}});
  }
  return out;
}

struct GraphGeodesic {
  EdgePath reduced;
  Polyline geometry;
  double total = 0.0;
  double min_variant_total = 0.0;
  int variants = 0;
  int violations = 0;  // variants with strictly smaller total oscillation
};

/// Geometry of the reduced edge path, audited against spur-inflated
/// homotopic variants of it.
inline GraphGeodesic graph_oscillatory_geodesic(const EmbeddedGraph& g, const EdgePath& p,
                                                const DirectionSchedule& schedule, int variants = 50,
                                                std::uint64_t seed = 0) {
  GraphGeodesic out;
  out.reduced = reduce_edge_path(g, p);
  out.geometry = edge_path_geometry(g, out.reduced);
  out.total = total_oscillation(out.geometry, schedule);
  out.min_variant_total = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> spurs(1, 3);
  for (int k = 0; k < variants; ++k) {
    const EdgePath v = inflate_with_spurs(g, out.reduced, spurs(rng), rng);
    const double t = total_oscillation(edge_path_geometry(g, v), schedule);
    out.min_variant_total = std::min(out.min_variant_total, t);
    if (t < out.total) ++out.violations;
    ++out.variants;
  }
  return out;
}

}  // namespace osc

#endif  // OSC_ORACLE_HPP
