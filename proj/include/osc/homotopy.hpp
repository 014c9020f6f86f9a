#ifndef OSC_HOMOTOPY_HPP
#define OSC_HOMOTOPY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osc/geom.hpp"
#include "osc/triangulate.hpp"

namespace osc {

/// One generator occurrence: hole index and crossing sign.
struct Letter {
  int hole = 0;
  int sign = 1;
  friend bool operator==(Letter, Letter) = default;
  friend auto operator<=>(Letter, Letter) = default;
};

/// Word in the free group on the holes.  Not reduced unless produced by
/// `free_reduce` (or a function documented to return reduced words).
class CrossingWord {
public:
  CrossingWord() = default;
  explicit CrossingWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  CrossingWord(std::initializer_list<Letter> letters) : letters_(letters) {}

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  bool is_reduced() const {
    for (std::size_t i = 1; i < letters_.size(); ++i)
      if (cancels(letters_[i - 1], letters_[i])) return false;
    return true;
  }

  CrossingWord inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back({it->hole, -it->sign});
    return CrossingWord(std::move(out));
  }

  CrossingWord operator*(const CrossingWord& other) const {
    std::vector<Letter> out = letters_;
    out.insert(out.end(), other.letters_.begin(), other.letters_.end());
    return CrossingWord(std::move(out));
  }

  /// Net signed crossing count of one hole (abelianized class).
  int exponent_sum(int hole) const {
    int s = 0;
    for (Letter l : letters_)
      if (l.hole == hole) s += l.sign;
    return s;
  }

  static bool cancels(Letter a, Letter b) { return a.hole == b.hole && a.sign == -b.sign; }

  friend bool operator==(const CrossingWord&, const CrossingWord&) = default;
  friend auto operator<=>(const CrossingWord& a, const CrossingWord& b) { return a.letters_ <=> b.letters_; }

  friend std::ostream& operator<<(std::ostream& os, const CrossingWord& w) {
    if (w.empty()) return os << "e";
    for (std::size_t i = 0; i < w.letters_.size(); ++i) {
      if (i) os << ' ';
      os << 'h' << w.letters_[i].hole << (w.letters_[i].sign > 0 ? "+" : "-");
    }
    return os;
  }

private:
  std::vector<Letter> letters_;
};

/// Single left-to-right stack pass.
inline CrossingWord free_reduce(const CrossingWord& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (Letter l : w.letters()) {
    if (!stack.empty() && CrossingWord::cancels(stack.back(), l)) stack.pop_back();
    else stack.push_back(l);
  }
  return CrossingWord(std::move(stack));
}

/// Segment from a point inside a hole to a point outside the outer polygon.
struct Cut {
  int hole = 0;
  Point start{};
  Point end{};
};

struct CutSystem {
  std::vector<Cut> cuts;
  double angle = 0.0;  // common ray direction
  int attempt = 0;
};

namespace detail {

// Side of a cut's supporting line; points on the line count as left (+1).
inline int cut_side(const Cut& c, Point p) { return orient(c.start, c.end, p) >= 0 ? 1 : -1; }

inline bool on_cut(const Cut& c, Point p) {
  if (orient(c.start, c.end, p) != 0) return false;
  const double t = dot(p - c.start, c.end - c.start);
  return t >= 0.0 && t <= dot(c.end - c.start, c.end - c.start);
}

// Appends the letters of the directed segment p->q.
inline void append_segment_letters(const CutSystem& cs, Point p, Point q, std::vector<Letter>& out) {
  if (p == q) return;
  std::pair<double, Letter> hits[8];
  std::vector<std::pair<double, Letter>> many;
  int count = 0;
  for (const Cut& c : cs.cuts) {
    const int sp = cut_side(c, p);
    const int sq = cut_side(c, q);
    if (sp == sq) continue;
    const int o1 = orient(p, q, c.start);
    const int o2 = orient(p, q, c.end);
    if (o1 * o2 > 0) continue;
    const Point cd = c.end - c.start;
    const double den = cross(q - p, cd);
    const double lambda = den != 0.0 ? cross(c.start - p, cd) / den : 0.0;
    const Letter l{c.hole, (sp < 0 && sq > 0) ? 1 : -1};
    if (count < 8) hits[count++] = {lambda, l};
    else many.emplace_back(lambda, l);
  }
  if (count == 0) return;
  if (count == 1) {
    out.push_back(hits[0].second);
    return;
  }
  many.insert(many.end(), hits, hits + count);
  std::sort(many.begin(), many.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& h : many) out.push_back(h.second);
}

}  // namespace detail

/// Letters of an arbitrary vertex sequence, without endpoint checks.
inline CrossingWord crossing_word_unchecked(std::span<const Point> pts, const CutSystem& cuts) {
  std::vector<Letter> out;
  for (std::size_t i = 1; i < pts.size(); ++i) detail::append_segment_letters(cuts, pts[i - 1], pts[i], out);
  return CrossingWord(std::move(out));
}

/// Transversal cut crossings of a path in path order (not reduced).
inline CrossingWord crossing_word(const Polyline& path, const CutSystem& cuts) {
  if (!path.is_closed()) {
    for (const Cut& c : cuts.cuts)
      if (detail::on_cut(c, path.front()) || detail::on_cut(c, path.back()))
        throw PerturbationError("path endpoint lies on cut " + std::to_string(c.hole));
  }
  return crossing_word_unchecked(path.vertices(), cuts);
}

inline CrossingWord reduced_word(const Polyline& path, const CutSystem& cuts) {
  return free_reduce(crossing_word_unchecked(path.vertices(), cuts));
}

namespace detail {

inline std::vector<double> ray_hits(Point o, Point d, const std::vector<Point>& ring) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point a = ring[i], b = ring[(i + 1) % ring.size()];
    const Point ab = b - a;
    const double den = cross(d, ab);
    if (den == 0.0) continue;
    const double s = cross(a - o, ab) / den;
    const double u = cross(a - o, d) / den;
    if (s > 0.0 && u >= 0.0 && u <= 1.0) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double attempt_angle(std::uint64_t seed, int attempt) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double base = std::numbers::pi / 2.0;
  if (seed != 0) base += two_pi * std::fmod(static_cast<double>(seed) * 0.6180339887498949, 1.0);
  if (attempt == 0) return base;
  return base + two_pi * std::fmod(static_cast<double>(attempt) * 0.7548776662466927, 1.0);
}

}  // namespace detail

/// Builds one cut per hole along a common ray direction.  Seed 0 starts with
/// vertical rays; failed attempts rotate the direction deterministically.
inline CutSystem build_cut_system(const PlanarDomain& domain, std::uint64_t seed = 0, int max_attempts = 64) {
  CutSystem cs;
  if (domain.hole_count() == 0) return cs;
  const double diam = domain.diameter();
  const double margin = 1e-6 * diam;
  const auto all_vertices = domain.vertices();

  // One interior point per hole per triangle; chosen per direction below.
  std::vector<std::vector<Point>> hole_centroids;
  for (const auto& h : domain.holes()) {
    std::vector<Point> cents;
    for (const auto& t : triangulate_polygon(h)) cents.push_back((1.0 / 3.0) * (h[t[0]] + h[t[1]] + h[t[2]]));
    hole_centroids.push_back(std::move(cents));
  }

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const double theta = detail::attempt_angle(seed, attempt);
    const Point d{std::cos(theta), std::sin(theta)};
    std::vector<Cut> cuts;
    bool ok = true;
    for (std::size_t hi = 0; hi < domain.hole_count() && ok; ++hi) {
      const auto& ring = domain.holes()[hi];
      const auto& cents = hole_centroids[hi];
      const Point origin = *std::max_element(cents.begin(), cents.end(),
                                             [&](Point a, Point b) { return dot(a, d) < dot(b, d); });
      for (Point v : all_vertices) {
        const double s = dot(v - origin, d);
        if (s >= -margin && std::fabs(cross(d, v - origin)) < margin) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      const auto own = detail::ray_hits(origin, d, ring);
      if (own.empty()) {
        ok = false;
        break;
      }
      const double s_exit = own.back();
      const double s_prev = own.size() >= 2 ? own[own.size() - 2] : 0.0;
      const Point start = origin + (0.5 * (s_prev + s_exit)) * d;
      std::vector<double> outs;
      for (double s : detail::ray_hits(origin, d, domain.outer()))
        if (s > s_exit) outs.push_back(s);
      if (outs.empty()) {
        ok = false;
        break;
      }
      const double s_out = outs.front();
      const double s_end = outs.size() >= 2 ? 0.5 * (outs[0] + outs[1]) : s_out + 0.05 * diam;
      const Cut cut{static_cast<int>(hi), start, origin + s_end * d};
      for (std::size_t hj = 0; hj < domain.hole_count() && ok; ++hj) {
        if (hj == hi) continue;
        const auto& other = domain.holes()[hj];
        for (std::size_t k = 0; k < other.size(); ++k)
          if (segments_intersect(cut.start, cut.end, other[k], other[(k + 1) % other.size()])) {
            ok = false;
            break;
          }
      }
      for (const Cut& prev : cuts)
        if (ok && (segments_intersect(cut.start, cut.end, prev.start, prev.end) ||
                   std::fabs(cross(d, prev.start - cut.start)) < margin))
          ok = false;
      if (ok) cuts.push_back(cut);
    }
    if (ok) {
      cs.cuts = std::move(cuts);
      cs.angle = theta;
      cs.attempt = attempt;
      return cs;
    }
  }
  throw ConstructionError("no valid cut system after " + std::to_string(max_attempts) + " attempts");
}

inline bool is_nullhomotopic(const PlanarDomain& domain, const Polyline& loop, const CutSystem& cuts) {
  (void)domain;
  if (!loop.is_closed()) throw PreconditionError("nullhomotopy test needs a closed loop");
  return reduced_word(loop, cuts).empty();
}

inline bool is_homotopic_rel_endpoints(const PlanarDomain& domain, const Polyline& a, const Polyline& b,
                                       const CutSystem& cuts) {
  if (!(a.front() == b.front()) || !(a.back() == b.back()))
    throw PreconditionError("paths do not share endpoints");
  return is_nullhomotopic(domain, a.then(b.reversed()), cuts);
}

/// True iff the chord between the path's endpoints lies in the domain and the
/// path is homotopic to it.
inline bool is_chord_homotopic(const PlanarDomain& domain, const Polyline& sub, const CutSystem& cuts) {
  const Point a = sub.front(), b = sub.back();
  if (!chord_in_domain(domain, a, b)) return false;
  std::vector<Point> loop = sub.vertices();
  if (!(a == b)) loop.push_back(a);
  return free_reduce(crossing_word_unchecked(loop, cuts)).empty();
}

}  // namespace osc

#endif  // OSC_HOMOTOPY_HPP
