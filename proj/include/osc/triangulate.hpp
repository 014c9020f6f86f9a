#ifndef OSC_TRIANGULATE_HPP
#define OSC_TRIANGULATE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "osc/geom.hpp"

namespace osc {

/// Triangles over the domain's own vertices.  Vertex indices refer to
/// `points` (outer ring first, then each hole in order).  `neighbors[t][k]`
/// is the triangle across edge (tri[k], tri[(k+1)%3]) or -1 on the boundary.
struct Triangulation {
  std::vector<Point> points;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::array<int, 3>> neighbors;

  Point corner(int t, int k) const { return points[triangles[t][k]]; }
  Point centroid(int t) const {
    const auto& tr = triangles[t];
    return (1.0 / 3.0) * (points[tr[0]] + points[tr[1]] + points[tr[2]]);
  }
  double area(int t) const {
    return 0.5 * cross(corner(t, 1) - corner(t, 0), corner(t, 2) - corner(t, 0));
  }
  bool contains(int t, Point p) const {
    return orient(corner(t, 0), corner(t, 1), p) >= 0 && orient(corner(t, 1), corner(t, 2), p) >= 0 &&
           orient(corner(t, 2), corner(t, 0), p) >= 0;
  }
  /// Edge slot k of triangle t shared with triangle u, or -1.
  int shared_edge(int t, int u) const {
    for (int k = 0; k < 3; ++k)
      if (neighbors[t][k] == u) return k;
    return -1;
  }
};

namespace detail {

inline bool point_in_triangle_closed(Point a, Point b, Point c, Point p) {
  return orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0;
}

// Ear clipping of a (weakly) simple counterclockwise ring of vertex indices.
inline std::vector<std::array<int, 3>> ear_clip(const std::vector<Point>& pts, std::vector<int> ring) {
  std::vector<std::array<int, 3>> out;
  auto is_ear = [&](std::size_t i, bool strict) {
    const std::size_t n = ring.size();
    const int ia = ring[(i + n - 1) % n], ib = ring[i], ic = ring[(i + 1) % n];
    const Point a = pts[ia], b = pts[ib], c = pts[ic];
    if (orient(a, b, c) <= 0) return false;
    for (std::size_t j = 0; j < n; ++j) {
      const int iq = ring[j];
      if (iq == ia || iq == ib || iq == ic) continue;
      const Point q = pts[iq];
      if (q == a || q == b || q == c) continue;
      if (strict) {
        if (point_in_triangle_closed(a, b, c, q)) return false;
      } else if (orient(a, b, q) > 0 && orient(b, c, q) > 0 && orient(c, a, q) > 0) {
        return false;
      }
    }
    return true;
  };
  while (ring.size() > 3) {
    bool clipped = false;
    for (bool strict : {true, false}) {
      for (std::size_t i = 0; i < ring.size(); ++i) {
        if (!is_ear(i, strict)) continue;
        const std::size_t n = ring.size();
        out.push_back({ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]});
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
      if (clipped) break;
    }
    if (!clipped) throw GeometryError("ear clipping failed: degenerate polygon");
  }
  if (orient(pts[ring[0]], pts[ring[1]], pts[ring[2]]) <= 0)
    throw GeometryError("ear clipping failed: degenerate final triangle");
  out.push_back({ring[0], ring[1], ring[2]});
  return out;
}

}  // namespace detail

/// Triangulates a simple polygon given as a point list (any orientation).
inline std::vector<std::array<int, 3>> triangulate_polygon(const std::vector<Point>& poly) {
  std::vector<int> ring(poly.size());
  std::iota(ring.begin(), ring.end(), 0);
  if (signed_area(poly) < 0.0) std::reverse(ring.begin(), ring.end());
  return detail::ear_clip(poly, std::move(ring));
}

/// Ear clipping after bridging each hole to the boundary from its leftmost
/// vertex to the nearest visible ring vertex.
inline Triangulation triangulate(const PlanarDomain& domain) {
  Triangulation tri;
  tri.points = domain.vertices();
  const auto& pts = tri.points;

  std::vector<int> ring(domain.outer().size());
  std::iota(ring.begin(), ring.end(), 0);

  std::vector<std::vector<int>> holes;
  int base = static_cast<int>(domain.outer().size());
  for (const auto& h : domain.holes()) {
    std::vector<int> idx(h.size());
    std::iota(idx.begin(), idx.end(), base);
    base += static_cast<int>(h.size());
    holes.push_back(std::move(idx));
  }
  auto leftmost = [&](const std::vector<int>& hole) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < hole.size(); ++k) {
      const Point p = pts[hole[k]], q = pts[hole[best]];
      if (p.x < q.x || (p.x == q.x && p.y < q.y)) best = k;
    }
    return best;
  };
  std::vector<std::size_t> order(holes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Point pa = pts[holes[a][leftmost(holes[a])]], pb = pts[holes[b][leftmost(holes[b])]];
    return pa.x < pb.x || (pa.x == pb.x && pa.y < pb.y);
  });

  std::vector<bool> merged(holes.size(), false);
  for (std::size_t hi : order) {
    const auto& hole = holes[hi];
    const std::size_t mpos = leftmost(hole);
    const int mi = hole[mpos];
    const Point m = pts[mi];

    auto blocked = [&](Point p) {
      auto crosses = [&](Point c, Point d) {
        if (c == m || d == m || c == p || d == p) {
          // Touching at a shared endpoint is fine; overlap along the bridge is not.
          const Point other = (c == m || c == p) ? d : c;
          const Point shared = (c == m || c == p) ? c : d;
          const Point far = shared == m ? p : m;
          return orient(m, p, other) == 0 && dot(other - shared, far - shared) > 0.0;
        }
        return segments_intersect(m, p, c, d);
      };
      for (std::size_t k = 0; k < ring.size(); ++k)
        if (crosses(pts[ring[k]], pts[ring[(k + 1) % ring.size()]])) return true;
      for (std::size_t h = 0; h < holes.size(); ++h) {
        if (merged[h]) continue;
        for (std::size_t k = 0; k < holes[h].size(); ++k)
          if (crosses(pts[holes[h][k]], pts[holes[h][(k + 1) % holes[h].size()]])) return true;
      }
      return false;
    };
    auto locally_inside = [&](std::size_t r, Point q) {
      const std::size_t n = ring.size();
      const Point a = pts[ring[(r + n - 1) % n]], b = pts[ring[r]], c = pts[ring[(r + 1) % n]];
      if (orient(a, b, c) >= 0) return orient(b, c, q) > 0 && orient(a, b, q) > 0;
      return !(orient(b, c, q) <= 0 && orient(a, b, q) <= 0);
    };

    std::size_t best = ring.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < ring.size(); ++r) {
      const Point p = pts[ring[r]];
      const double d = dist(p, m);
      if (d >= best_d || d == 0.0) continue;
      if (!locally_inside(r, m)) continue;
      if (blocked(p)) continue;
      const Point mid = lerp(m, p, 0.5);
      if (!contains_point(domain, mid) || domain.boundary_distance(mid) == 0.0) continue;
      best = r;
      best_d = d;
    }
    if (best == ring.size()) throw GeometryError("no visible bridge for hole " + std::to_string(hi));

    std::vector<int> next(ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    for (std::size_t k = 0; k <= hole.size(); ++k) next.push_back(hole[(mpos + k) % hole.size()]);
    next.push_back(ring[best]);
    next.insert(next.end(), ring.begin() + static_cast<std::ptrdiff_t>(best) + 1, ring.end());
    ring = std::move(next);
    merged[hi] = true;
  }

  tri.triangles = detail::ear_clip(pts, ring);

  tri.neighbors.assign(tri.triangles.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
  for (int t = 0; t < static_cast<int>(tri.triangles.size()); ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = tri.triangles[t][k], b = tri.triangles[t][(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].emplace_back(t, k);
    }
  for (const auto& [key, uses] : edges) {
    if (uses.size() > 2) throw GeometryError("triangulation edge shared by more than two triangles");
    if (uses.size() == 2) {
      tri.neighbors[uses[0].first][uses[0].second] = uses[1].first;
      tri.neighbors[uses[1].first][uses[1].second] = uses[0].first;
    }
  }
  return tri;
}

}  // namespace osc

#endif  // OSC_TRIANGULATE_HPP
