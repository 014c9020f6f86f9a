#ifndef OSC_GEOM_HPP
#define OSC_GEOM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osc/error.hpp"
#include "osc/predicates.hpp"

namespace osc {

/// Relative geometric tolerance; absolute tolerances are this times the
/// domain diameter.
inline constexpr double kEpsGeom = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point lerp(Point a, Point b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Exact orientation sign of c relative to the directed line a->b.
inline int orient(Point a, Point b, Point c) {
  return predicates::orient2d(a.x, a.y, b.x, b.y, c.x, c.y);
}

inline double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, lerp(a, b, t));
}

/// Closed segments [a,b] and [c,d] share at least one point.
inline bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  auto on_seg = [](Point p, Point q, Point r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  if (o1 == 0 && on_seg(a, b, c)) return true;
  if (o2 == 0 && on_seg(a, b, d)) return true;
  if (o3 == 0 && on_seg(c, d, a)) return true;
  if (o4 == 0 && on_seg(c, d, b)) return true;
  return false;
}

struct BBox {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }
  bool degenerate() const { return !(width() > 0.0) || !(height() > 0.0); }

  static BBox of(std::span<const Point> pts) {
    BBox b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Point p : pts) {
      b.xmin = std::min(b.xmin, p.x);
      b.ymin = std::min(b.ymin, p.y);
      b.xmax = std::max(b.xmax, p.x);
      b.ymax = std::max(b.ymax, p.y);
    }
    return b;
  }
};

/// Piecewise-linear path.  Vertices are stored as given; `normalized()`
/// drops consecutive duplicates (the canonical form).
class Polyline {
public:
  Polyline() = default;
  explicit Polyline(std::vector<Point> vertices) : v_(std::move(vertices)) {
    if (v_.empty()) throw GeometryError("polyline needs at least one vertex");
    for (Point p : v_)
      if (!is_finite(p)) throw GeometryError("polyline has a non-finite coordinate");
  }
  Polyline(std::initializer_list<Point> pts) : Polyline(std::vector<Point>(pts)) {}

  const std::vector<Point>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }
  Point operator[](std::size_t i) const { return v_[i]; }
  Point front() const { return v_.front(); }
  Point back() const { return v_.back(); }
  bool is_closed() const { return v_.size() >= 1 && v_.front() == v_.back(); }

  bool is_constant() const {
    return std::all_of(v_.begin(), v_.end(), [&](Point p) { return p == v_.front(); });
  }

  bool is_normalized() const {
    if (v_.size() == 1) return true;
    for (std::size_t i = 1; i < v_.size(); ++i)
      if (v_[i] == v_[i - 1]) return false;
    return true;
  }

  Polyline normalized() const {
    std::vector<Point> out;
    out.reserve(v_.size());
    for (Point p : v_)
      if (out.empty() || !(out.back() == p)) out.push_back(p);
    return Polyline(std::move(out));
  }

  double length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < v_.size(); ++i) s += dist(v_[i - 1], v_[i]);
    return s;
  }

  /// Cumulative arc length at each vertex.
  std::vector<double> arclengths() const {
    std::vector<double> s(v_.size(), 0.0);
    for (std::size_t i = 1; i < v_.size(); ++i) s[i] = s[i - 1] + dist(v_[i - 1], v_[i]);
    return s;
  }

  /// Point at a fractional vertex parameter u in [0, size-1].
  Point at_param(double u) const {
    if (u <= 0.0) return v_.front();
    const double last = static_cast<double>(v_.size() - 1);
    if (u >= last) return v_.back();
    const auto k = static_cast<std::size_t>(std::floor(u));
    const double f = u - static_cast<double>(k);
    if (f == 0.0) return v_[k];
    return lerp(v_[k], v_[k + 1], f);
  }

  /// Point at arc length s from the start (clamped).
  Point at_arclength(double s) const {
    if (v_.size() == 1 || s <= 0.0) return v_.front();
    double acc = 0.0;
    for (std::size_t i = 1; i < v_.size(); ++i) {
      const double seg = dist(v_[i - 1], v_[i]);
      if (acc + seg >= s && seg > 0.0) return lerp(v_[i - 1], v_[i], (s - acc) / seg);
      acc += seg;
    }
    return v_.back();
  }

  /// Sub-path between fractional vertex parameters u0 <= u1.
  Polyline subpath(double u0, double u1) const {
    std::vector<Point> out{at_param(u0)};
    const auto first = static_cast<std::size_t>(std::floor(u0)) + 1;
    for (std::size_t k = first; static_cast<double>(k) < u1 && k < v_.size(); ++k)
      if (!(out.back() == v_[k])) out.push_back(v_[k]);
    const Point end = at_param(u1);
    if (!(out.back() == end)) out.push_back(end);
    return Polyline(std::move(out));
  }

  /// Prefix up to arc length s.
  Polyline prefix(double s) const {
    std::vector<Point> out{v_.front()};
    double acc = 0.0;
    for (std::size_t i = 1; i < v_.size(); ++i) {
      const double seg = dist(v_[i - 1], v_[i]);
      if (acc + seg >= s) {
        if (seg > 0.0) {
          const Point p = lerp(v_[i - 1], v_[i], std::clamp((s - acc) / seg, 0.0, 1.0));
          if (!(out.back() == p)) out.push_back(p);
        }
        return Polyline(std::move(out));
      }
      out.push_back(v_[i]);
      acc += seg;
    }
    return Polyline(std::move(out));
  }

  Polyline reversed() const { return Polyline(std::vector<Point>(v_.rbegin(), v_.rend())); }

  /// Concatenation; requires back() == other.front().
  Polyline then(const Polyline& other) const {
    if (!(back() == other.front()))
      throw PreconditionError("concatenated paths do not share an endpoint");
    std::vector<Point> out = v_;
    out.insert(out.end(), other.v_.begin() + 1, other.v_.end());
    return Polyline(std::move(out));
  }

  friend bool operator==(const Polyline&, const Polyline&) = default;

private:
  std::vector<Point> v_;
};

enum class Location { Outside, Boundary, Inside };

inline Location locate_in_polygon(std::span<const Point> poly, Point p) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = poly[j];
    const Point b = poly[i];
    const int o = orient(a, b, p);
    if (o == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
        std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y))
      return Location::Boundary;
    if ((a.y > p.y) != (b.y > p.y)) {
      if ((b.y > a.y && o > 0) || (b.y < a.y && o < 0)) inside = !inside;
    }
  }
  return inside ? Location::Inside : Location::Outside;
}

inline double signed_area(std::span<const Point> poly) {
  double a = 0.0;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
    a += cross(poly[j], poly[i]);
  return 0.5 * a;
}

inline bool polygon_is_simple(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (poly[i] == poly[j]) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i], b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point c = poly[j], d = poly[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared vertex only; reject a fold-back along the same line.
        const Point shared = (j == i + 1) ? b : a;
        const Point other1 = (j == i + 1) ? a : b;
        const Point other2 = (j == i + 1) ? d : c;
        if (orient(other1, shared, other2) == 0 && dot(other1 - shared, other2 - shared) > 0.0)
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return std::fabs(signed_area(poly)) > 0.0;
}

/// Closed polygonal region with polygonal holes.  Outer ring is stored
/// counterclockwise, holes clockwise.
class PlanarDomain {
public:
  PlanarDomain() = default;
  PlanarDomain(std::vector<Point> outer, std::vector<std::vector<Point>> holes)
      : outer_(std::move(outer)), holes_(std::move(holes)) {
    validate();
  }

  const std::vector<Point>& outer() const { return outer_; }
  const std::vector<std::vector<Point>>& holes() const { return holes_; }
  std::size_t hole_count() const { return holes_.size(); }

  BBox bbox() const { return BBox::of(outer_); }
  double diameter() const { return bbox().diagonal(); }
  double tolerance() const { return kEpsGeom * std::max(diameter(), 1e-300); }

  std::vector<Point> vertices() const {
    std::vector<Point> out = outer_;
    for (const auto& h : holes_) out.insert(out.end(), h.begin(), h.end());
    return out;
  }

  /// Every boundary edge, outer ring first.
  std::vector<std::pair<Point, Point>> edges() const {
    std::vector<std::pair<Point, Point>> out;
    auto add = [&](const std::vector<Point>& ring) {
      for (std::size_t i = 0; i < ring.size(); ++i) out.emplace_back(ring[i], ring[(i + 1) % ring.size()]);
    };
    add(outer_);
    for (const auto& h : holes_) add(h);
    return out;
  }

  double area() const {
    double a = std::fabs(signed_area(outer_));
    for (const auto& h : holes_) a -= std::fabs(signed_area(h));
    return a;
  }

  double boundary_distance(Point p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : edges()) d = std::min(d, point_segment_distance(p, a, b));
    return d;
  }

private:
  void validate() {
    for (Point p : outer_)
      if (!is_finite(p)) throw GeometryError("outer polygon has a non-finite coordinate");
    if (!polygon_is_simple(outer_)) throw GeometryError("outer polygon is not simple");
    if (signed_area(outer_) < 0.0) std::reverse(outer_.begin(), outer_.end());
    for (std::size_t h = 0; h < holes_.size(); ++h) {
      auto& ring = holes_[h];
      for (Point p : ring)
        if (!is_finite(p)) throw GeometryError("hole " + std::to_string(h) + " has a non-finite coordinate");
      if (!polygon_is_simple(ring)) throw GeometryError("hole " + std::to_string(h) + " is not simple");
      if (signed_area(ring) > 0.0) std::reverse(ring.begin(), ring.end());
      for (Point p : ring)
        if (locate_in_polygon(outer_, p) != Location::Inside)
          throw GeometryError("hole " + std::to_string(h) + " is not strictly inside the outer polygon");
      if (rings_touch(ring, outer_))
        throw GeometryError("hole " + std::to_string(h) + " touches the outer boundary");
    }
    for (std::size_t i = 0; i < holes_.size(); ++i)
      for (std::size_t j = i + 1; j < holes_.size(); ++j) {
        if (rings_touch(holes_[i], holes_[j]) || locate_in_polygon(holes_[j], holes_[i][0]) != Location::Outside ||
            locate_in_polygon(holes_[i], holes_[j][0]) != Location::Outside)
          throw GeometryError("holes " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
  }

  static bool rings_touch(const std::vector<Point>& r1, const std::vector<Point>& r2) {
    for (std::size_t i = 0; i < r1.size(); ++i)
      for (std::size_t j = 0; j < r2.size(); ++j)
        if (segments_intersect(r1[i], r1[(i + 1) % r1.size()], r2[j], r2[(j + 1) % r2.size()])) return true;
    return false;
  }

  std::vector<Point> outer_;
  std::vector<std::vector<Point>> holes_;
};

/// Closed region test: boundary points count as inside.
inline bool contains_point(const PlanarDomain& domain, Point p) {
  if (locate_in_polygon(domain.outer(), p) == Location::Outside) return false;
  for (const auto& h : domain.holes())
    if (locate_in_polygon(h, p) == Location::Inside) return false;
  return true;
}

/// Membership up to an absolute tolerance.
inline bool contains_point_tol(const PlanarDomain& domain, Point p, double tol) {
  return contains_point(domain, p) || domain.boundary_distance(p) <= tol;
}

/// Whether the closed segment [a,b] stays inside the closed domain.  Grazing
/// contact with the boundary is allowed; excursions out of the domain count
/// only when they reach deeper than `tol`.
inline bool chord_in_domain(const PlanarDomain& domain, Point a, Point b, double tol) {
  if (!contains_point_tol(domain, a, tol) || !contains_point_tol(domain, b, tol))
    throw PreconditionError("chord endpoint lies outside the domain");
  if (a == b) return true;
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  std::vector<double> ts{0.0, 1.0};
  const auto edges = domain.edges();
  for (const auto& [c, d] : edges) {
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    if (o1 * o2 > 0) continue;
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    if (o3 * o4 > 0) continue;
    if (o1 == 0 && o2 == 0) {
      ts.push_back(dot(c - a, ab) / len2);
      ts.push_back(dot(d - a, ab) / len2);
      continue;
    }
    const double den = cross(ab, d - c);
    if (den != 0.0) ts.push_back(cross(c - a, d - c) / den);
  }
  for (const auto& [c, d] : edges) {
    (void)d;
    if (point_segment_distance(c, a, b) <= tol) ts.push_back(dot(c - a, ab) / len2);
  }
  for (double& t : ts) t = std::clamp(t, 0.0, 1.0);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double t0 = ts[i - 1], t1 = ts[i];
    for (double f : {0.25, 0.5, 0.75}) {
      const Point m = lerp(a, b, t0 + f * (t1 - t0));
      if (!contains_point(domain, m) && domain.boundary_distance(m) > tol) return false;
    }
  }
  return true;
}

inline bool chord_in_domain(const PlanarDomain& domain, Point a, Point b) {
  return chord_in_domain(domain, a, b, domain.tolerance());
}

/// Rigid motion p -> R(angle) * F(p) + translation, where F mirrors across the
/// x-axis when `reflect` is set.
struct Isometry {
  double angle = 0.0;
  Point translation{};
  bool reflect = false;

  Point operator()(Point p) const {
    if (reflect) p.y = -p.y;
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y + translation.x, s * p.x + c * p.y + translation.y};
  }
};

inline Point apply_isometry(const Isometry& iso, Point p) { return iso(p); }

inline Polyline apply_isometry(const Isometry& iso, const Polyline& path) {
  std::vector<Point> out;
  out.reserve(path.size());
  for (Point p : path.vertices()) out.push_back(iso(p));
  return Polyline(std::move(out));
}

inline PlanarDomain apply_isometry(const Isometry& iso, const PlanarDomain& domain) {
  auto map_ring = [&](const std::vector<Point>& ring) {
    std::vector<Point> out;
    out.reserve(ring.size());
    for (Point p : ring) out.push_back(iso(p));
    return out;
  };
  std::vector<std::vector<Point>> holes;
  for (const auto& h : domain.holes()) holes.push_back(map_ring(h));
  return PlanarDomain(map_ring(domain.outer()), std::move(holes));
}

namespace detail {

struct Interval {
  double lo = 1.0, hi = 0.0;
  bool empty() const { return lo > hi; }
};

// {t in [0,1] : |a + t(b-a) - p| <= eps}
inline Interval free_interval(Point p, Point a, Point b, double eps) {
  const Point d = b - a;
  const Point w = a - p;
  const double A = dot(d, d);
  const double B = 2.0 * dot(w, d);
  const double C = dot(w, w) - eps * eps;
  if (A == 0.0) return C <= 0.0 ? Interval{0.0, 1.0} : Interval{};
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return {};
  const double r = std::sqrt(disc);
  const double t0 = (-B - r) / (2.0 * A);
  const double t1 = (-B + r) / (2.0 * A);
  Interval iv{std::max(0.0, t0), std::min(1.0, t1)};
  return iv;
}

inline bool frechet_decide(const std::vector<Point>& P, const std::vector<Point>& Q, double eps) {
  const std::size_t n = P.size(), m = Q.size();
  if (dist(P.front(), Q.front()) > eps || dist(P.back(), Q.back()) > eps) return false;
  // Reachable intervals: left[i][j] on P-vertex i along Q-segment j,
  // bottom[i][j] on Q-vertex j along P-segment i.
  std::vector<Interval> left(n * (m - 1)), bottom((n - 1) * m);
  auto L = [&](std::size_t i, std::size_t j) -> Interval& { return left[i * (m - 1) + j]; };
  auto Bt = [&](std::size_t i, std::size_t j) -> Interval& { return bottom[i * m + j]; };
  {
    bool open = true;
    for (std::size_t j = 0; j + 1 < m; ++j) {
      Interval f = free_interval(P[0], Q[j], Q[j + 1], eps);
      if (open && !f.empty() && f.lo <= 0.0) {
        L(0, j) = {0.0, f.hi};
        open = f.hi >= 1.0;
      } else {
        open = false;
      }
    }
    open = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      Interval f = free_interval(Q[0], P[i], P[i + 1], eps);
      if (open && !f.empty() && f.lo <= 0.0) {
        Bt(i, 0) = {0.0, f.hi};
        open = f.hi >= 1.0;
      } else {
        open = false;
      }
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const Interval lr = L(i, j);
      const Interval br = Bt(i, j);
      const Interval fr = free_interval(P[i + 1], Q[j], Q[j + 1], eps);
      const Interval ft = free_interval(Q[j + 1], P[i], P[i + 1], eps);
      Interval right{}, top{};
      if (!br.empty()) right = fr;
      else if (!lr.empty() && !fr.empty()) right = {std::max(fr.lo, lr.lo), fr.hi};
      if (!lr.empty()) top = ft;
      else if (!br.empty() && !ft.empty()) top = {std::max(ft.lo, br.lo), ft.hi};
      L(i + 1, j) = right;
      Bt(i, j + 1) = top;
    }
  }
  const Interval a = L(n - 1, m - 2);
  const Interval b = Bt(n - 2, m - 1);
  return (!a.empty() && a.hi >= 1.0) || (!b.empty() && b.hi >= 1.0);
}

}  // namespace detail

/// Continuous Fréchet distance between two polylines (decision procedure on
/// the free-space diagram plus bisection on the distance).
inline double frechet_distance(const Polyline& p, const Polyline& q) {
  const Polyline a = p.normalized();
  const Polyline b = q.normalized();
  if (a == b) return 0.0;
  const auto& P = a.vertices();
  const auto& Q = b.vertices();
  if (P.size() == 1 || Q.size() == 1) {
    const auto& single = P.size() == 1 ? P : Q;
    const auto& other = P.size() == 1 ? Q : P;
    double d = 0.0;
    for (Point x : other) d = std::max(d, dist(single.front(), x));
    return d;
  }
  double lo = std::max(dist(P.front(), Q.front()), dist(P.back(), Q.back()));
  double hi = 0.0;
  for (Point x : P)
    for (Point y : Q) hi = std::max(hi, dist(x, y));
  hi = std::max(hi, lo);
  if (detail::frechet_decide(P, Q, lo)) return lo;
  const double scale = std::max(hi, 1e-300);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * scale; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::frechet_decide(P, Q, mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

/// Discrete Fréchet distance between the vertex sequences (coupling search).
inline double discrete_frechet_distance(const Polyline& p, const Polyline& q) {
  const auto& P = p.vertices();
  const auto& Q = q.vertices();
  const std::size_t n = P.size(), m = Q.size();
  std::vector<double> ca(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double d = dist(P[i], Q[j]);
      double best;
      if (i == 0 && j == 0) best = d;
      else if (i == 0) best = std::max(ca[j - 1], d);
      else if (j == 0) best = std::max(ca[(i - 1) * m], d);
      else
        best = std::max(std::min({ca[(i - 1) * m + j], ca[(i - 1) * m + j - 1], ca[i * m + j - 1]}), d);
      ca[i * m + j] = best;
    }
  return ca.back();
}

/// Resample a polyline so that no edge is longer than `h` (original vertices kept).
inline Polyline refine(const Polyline& path, double h) {
  std::vector<Point> out{path.front()};
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Point a = path[i - 1], b = path[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(dist(a, b) / h)));
    for (int k = 1; k <= pieces; ++k) out.push_back(lerp(a, b, static_cast<double>(k) / pieces));
  }
  return Polyline(std::move(out));
}

}  // namespace osc

#endif  // OSC_GEOM_HPP
