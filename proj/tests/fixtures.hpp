#ifndef OSC_TESTS_FIXTURES_HPP
#define OSC_TESTS_FIXTURES_HPP

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "osc/osc.hpp"

namespace fx {

using namespace osc;

inline std::vector<Point> rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

inline std::vector<Point> hole_rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x0, y1}, {x1, y1}, {x1, y0}};
}

inline std::vector<Point> regular(Point c, double r, int n, double phase = 0.0, bool ccw = true) {
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / n * (ccw ? 1.0 : -1.0);
    out.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  return out;
}

inline PlanarDomain unit_square() { return PlanarDomain(rect(0, 0, 1, 1), {}); }

inline PlanarDomain square_with_hole() { return PlanarDomain(rect(0, 0, 1, 1), {hole_rect(0.4, 0.4, 0.6, 0.6)}); }

inline PlanarDomain two_holes() {
  return PlanarDomain(rect(0, 0, 2, 1), {hole_rect(0.4, 0.4, 0.6, 0.6), hole_rect(1.4, 0.4, 1.6, 0.6)});
}

inline PlanarDomain three_holes() {
  return PlanarDomain(rect(0, 0, 3, 2), {hole_rect(0.4, 0.5, 0.8, 1.5), hole_rect(1.3, 0.3, 1.7, 0.9),
                                         hole_rect(2.2, 0.8, 2.6, 1.6)});
}

struct Named {
  std::string name;
  PlanarDomain domain;
};

// Star-shaped outer polygon with up to `holes` small polygonal holes.
inline PlanarDomain random_domain(std::mt19937_64& rng, int holes, int outer_n, int hole_n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> ang;
    for (int i = 0; i < outer_n; ++i) ang.push_back(2.0 * std::numbers::pi * (i + 0.2 + 0.6 * u(rng)) / outer_n);
    std::vector<Point> outer;
    for (double a : ang) {
      const double r = 4.0 + 1.5 * u(rng);
      outer.push_back({r * std::cos(a), r * std::sin(a)});
    }
    std::vector<std::vector<Point>> hs;
    std::vector<std::pair<Point, double>> discs;
    for (int h = 0; h < holes; ++h) {
      for (int k = 0; k < 200; ++k) {
        const Point c{-3.0 + 6.0 * u(rng), -3.0 + 6.0 * u(rng)};
        const double r = 0.35 + 0.5 * u(rng);
        bool ok = locate_in_polygon(outer, c) == Location::Inside;
        for (Point q : outer) ok = ok && dist(q, c) > r + 0.4;
        for (std::size_t i = 0; ok && i < outer.size(); ++i)
          ok = point_segment_distance(c, outer[i], outer[(i + 1) % outer.size()]) > r + 0.4;
        for (const auto& [c2, r2] : discs) ok = ok && dist(c, c2) > r + r2 + 0.4;
        if (!ok) continue;
        discs.push_back({c, r});
        hs.push_back(regular(c, r, hole_n, 2.0 * std::numbers::pi * u(rng), false));
        break;
      }
    }
    if (static_cast<int>(hs.size()) != holes) continue;
    try {
      return PlanarDomain(std::move(outer), std::move(hs));
    } catch (const GeometryError&) {
    }
  }
  throw ConstructionError("no random domain");
}

/// Twenty-plus domains with at most five holes and at most forty vertices.
inline std::vector<Named> domains() {
  std::vector<Named> out;
  out.push_back({"square", unit_square()});
  out.push_back({"square-hole", square_with_hole()});
  out.push_back({"two-holes", two_holes()});
  out.push_back({"triangle-hole", PlanarDomain({{0, 0}, {4, 0}, {2, 3.5}}, {regular({2, 1.2}, 0.5, 3, 0.3, false)})});
  out.push_back({"l-shape", PlanarDomain({{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}}, {})});
  out.push_back({"l-shape-hole",
                 PlanarDomain({{0, 0}, {4, 0}, {4, 1.5}, {1.5, 1.5}, {1.5, 4}, {0, 4}}, {hole_rect(0.5, 0.5, 1.0, 1.0)})});
  out.push_back({"u-shape", PlanarDomain({{0, 0}, {3, 0}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}}, {})});
  out.push_back({"three-holes", three_holes()});
  out.push_back({"five-holes",
                 PlanarDomain(rect(0, 0, 4, 4), {hole_rect(0.5, 0.5, 1.0, 1.0), hole_rect(3.0, 0.5, 3.5, 1.0),
                                                 hole_rect(1.75, 1.75, 2.25, 2.25), hole_rect(0.5, 3.0, 1.0, 3.5),
                                                 hole_rect(3.0, 3.0, 3.5, 3.5)})});
  out.push_back({"hexagon-holes", PlanarDomain(regular({0, 0}, 3.0, 6), {regular({-1, 0}, 0.5, 4, 0.2, false),
                                                                         regular({1, 0.3}, 0.6, 5, 0.1, false)})});
  out.push_back({"comb", PlanarDomain({{0, 0}, {5, 0}, {5, 3}, {4, 3}, {4, 1}, {3, 1}, {3, 3}, {2, 3}, {2, 1}, {1, 1}, {1, 3}, {0, 3}},
                                      {hole_rect(2.2, 0.2, 2.8, 0.7)})});
  std::mt19937_64 rng(20240601);
  int k = 0;
  while (out.size() < 24) {
    const int holes = 1 + k % 4;
    const int outer_n = 6 + k % 5;
    const int hole_n = 3 + k % 3;
    out.push_back({"random-" + std::to_string(k), random_domain(rng, holes, outer_n, hole_n)});
    ++k;
  }
  return out;
}

inline Point random_point(const PlanarDomain& d, std::mt19937_64& rng) {
  const BBox b = d.bbox();
  std::uniform_real_distribution<double> ux(b.xmin, b.xmax), uy(b.ymin, b.ymax);
  for (;;) {
    const Point p{ux(rng), uy(rng)};
    if (contains_point(d, p) && d.boundary_distance(p) > 1e-3 * d.diameter()) return p;
  }
}

/// Random walk of mutually visible waypoints.
inline Polyline random_path(const PlanarDomain& d, std::mt19937_64& rng, int hops) {
  std::vector<Point> pts{random_point(d, rng)};
  while (static_cast<int>(pts.size()) <= hops) {
    const Point q = random_point(d, rng);
    if (chord_in_domain(d, pts.back(), q)) pts.push_back(q);
  }
  return Polyline(std::move(pts));
}

inline Polyline random_loop(const PlanarDomain& d, std::mt19937_64& rng, int hops) {
  for (;;) {
    Polyline p = random_path(d, rng, hops);
    if (chord_in_domain(d, p.back(), p.front())) {
      std::vector<Point> pts = p.vertices();
      pts.push_back(pts.front());
      return Polyline(std::move(pts));
    }
  }
}

inline std::vector<Point> random_convex(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ang;
  for (int i = 0; i < n; ++i) ang.push_back(2.0 * std::numbers::pi * u(rng));
  std::sort(ang.begin(), ang.end());
  std::vector<Point> pts;
  const double sx = 1.0 + 2.0 * u(rng), sy = 1.0 + 2.0 * u(rng);
  for (double a : ang) pts.push_back({sx * std::cos(a), sy * std::sin(a)});
  std::vector<Point> out;
  for (Point p : pts)
    if (out.empty() || dist(out.back(), p) > 1e-3) out.push_back(p);
  return out;
}

// Theta graph: two poles joined by three arcs, the middle one straight.
inline EmbeddedGraph theta_graph() {
  std::vector<Point> v{{0, 0}, {2, 0}};
  std::vector<GraphEdge> e{{0, 1, Polyline{{0, 0}, {1, 1}, {2, 0}}},
                           {0, 1, Polyline{{0, 0}, {2, 0}}},
                           {0, 1, Polyline{{0, 0}, {1, -1}, {2, 0}}}};
  return EmbeddedGraph(std::move(v), std::move(e));
}

inline EmbeddedGraph grid_graph(int n) {
  std::vector<Point> v;
  std::vector<GraphEdge> e;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v.push_back({static_cast<double>(i), static_cast<double>(j)});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * n + i;
      if (i + 1 < n) e.push_back({a, a + 1, Polyline{v[a], v[a + 1]}});
      if (j + 1 < n) e.push_back({a, a + n, Polyline{v[a], v[a + n]}});
    }
  return EmbeddedGraph(std::move(v), std::move(e));
}

inline EdgePath random_walk(const EmbeddedGraph& g, std::mt19937_64& rng, int steps) {
  std::uniform_int_distribution<int> pv(0, static_cast<int>(g.vertex_count()) - 1);
  EdgePath p{pv(rng), {}};
  int at = p.start;
  for (int k = 0; k < steps; ++k) {
    const auto inc = g.incident(at);
    std::uniform_int_distribution<std::size_t> pick(0, inc.size() - 1);
    const auto [e, dir] = inc[pick(rng)];
    p.steps.push_back({e, dir});
    at = g.head(e, dir);
  }
  return p;
}

inline EmbeddedGraph cycle_graph(int n) {
  std::vector<Point> v = regular({0, 0}, 1.0, n);
  std::vector<GraphEdge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, Polyline{v[i], v[(i + 1) % n]}});
  return EmbeddedGraph(std::move(v), std::move(e));
}

inline MapSpec loop_map(const EmbeddedGraph& g, std::vector<Point> images) {
  MapSpec m{g, images, {}};
  for (const auto& e : g.edges()) m.edge_images.push_back(Polyline{images[e.u], images[e.v]});
  return m;
}

// Annulus target and two maps of a 4-cycle, each winding once around the hole.
struct AnnulusMaps {
  PlanarDomain domain = square_with_hole();
  MapSpec f = loop_map(cycle_graph(4), {{0.8, 0.5}, {0.5, 0.8}, {0.2, 0.5}, {0.5, 0.2}});
  MapSpec g = loop_map(cycle_graph(4), {{0.9, 0.3}, {0.7, 0.9}, {0.1, 0.7}, {0.3, 0.1}});
  Polyline alpha{{0.9, 0.3}, {0.8, 0.5}};
};

}  // namespace fx

#endif  // OSC_TESTS_FIXTURES_HPP
