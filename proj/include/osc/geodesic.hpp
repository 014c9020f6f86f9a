#ifndef OSC_GEODESIC_HPP
#define OSC_GEODESIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "osc/error.hpp"
#include "osc/geom.hpp"
#include "osc/homotopy.hpp"
#include "osc/oscillation.hpp"

namespace osc {

struct ReductionReport {
  int sweeps = 0;
  int replacements = 0;
  double initial_T = 0.0;
  double final_T = 0.0;
  bool converged = false;
  std::vector<double> sweep_T;  // total oscillation after each sweep
};

struct SolverOptions {
  int max_sweeps = 200;
  double eps_angle = 1e-7;
  /// Absolute geometric tolerance; nonpositive means domain.tolerance().
  double tol = 0.0;
  /// Also sweep the directions from each path vertex to every domain vertex
  /// and to every non-adjacent path vertex.
  bool vertex_directions = true;
  int samples = 256;
  long max_replacements = 200000;
  /// Called after every replacement with the path before and after it.
  std::function<void(const Polyline&, const Polyline&)> observer;
};

class GeodesicNonConvergence : public NonConvergenceError {
public:
  GeodesicNonConvergence(const std::string& what, Polyline best, ReductionReport report)
      : NonConvergenceError(what), best_(std::move(best)), report_(std::move(report)) {}
  const Polyline& best() const { return best_; }
  const ReductionReport& report() const { return report_; }

private:
  Polyline best_;
  ReductionReport report_;
};

namespace detail {

// Reduced words as nodes of a trie: equal group elements share one node.
class WordTrie {
public:
  WordTrie() { nodes_.push_back({-1, {}}); }
  static constexpr int root = 0;

  int push(int node, Letter l) {
    if (node != root && CrossingWord::cancels(nodes_[node].letter, l)) return nodes_[node].parent;
    auto key = std::make_pair(node, l);
    auto it = children_.find(key);
    if (it != children_.end()) return it->second;
    nodes_.push_back({node, l});
    const int id = static_cast<int>(nodes_.size()) - 1;
    children_.emplace(key, id);
    return id;
  }

private:
  struct Node {
    int parent;
    Letter letter;
  };
  std::vector<Node> nodes_;
  std::map<std::pair<int, Letter>, int> children_;
};

struct Event {
  double u;    // fractional vertex parameter along the path
  int level;   // index into the level list
  Point p;
  int node;    // reduced word of the prefix ending here
};

// Candidate search for chords parallel to one direction.  With `only` set,
// the search is restricted to the single line through that point.
class ChordScanner {
public:
  ChordScanner(const PlanarDomain& domain, const CutSystem& cuts, double tol)
      : domain_(domain), cuts_(cuts), tol_(tol), domain_vertices_(domain.vertices()) {}

  // First valid replacement (leftmost start, farthest end) or nullopt.
  std::optional<std::pair<Event, Event>> find(const std::vector<Point>& path, Point dir,
                                              std::optional<Point> only) {
    const Point nrm{-dir.y, dir.x};
    build_levels(path, nrm, only);
    build_events(path, nrm);
    if (events_.size() < 2) return std::nullopt;
    std::vector<std::vector<int>> by_level(levels_.size());
    for (int e = 0; e < static_cast<int>(events_.size()); ++e) by_level[events_[e].level].push_back(e);
    std::vector<Letter> chord;
    for (int ec = 0; ec < static_cast<int>(events_.size()); ++ec) {
      const Event& c = events_[ec];
      const auto& same = by_level[c.level];
      for (auto it = same.rbegin(); it != same.rend() && *it > ec; ++it) {
        const Event& d = events_[*it];
        chord.clear();
        append_segment_letters(cuts_, c.p, d.p, chord);
        int n = c.node;
        for (Letter l : chord) n = trie_.push(n, l);
        if (n != d.node) continue;
        if (!deviates(path, c, d)) continue;
        if (!chord_in_domain(domain_, c.p, d.p, tol_)) continue;
        if (!loop_is_trivial(path, c, d)) continue;
        return std::make_pair(c, d);
      }
    }
    return std::nullopt;
  }

private:
  void build_levels(const std::vector<Point>& path, Point nrm, std::optional<Point> only) {
    levels_.clear();
    if (only) {
      levels_.push_back(dot(nrm, *only));
      return;
    }
    std::vector<double> hs;
    hs.reserve(domain_vertices_.size() + path.size());
    for (Point p : domain_vertices_) hs.push_back(dot(nrm, p));
    for (Point p : path) hs.push_back(dot(nrm, p));
    std::sort(hs.begin(), hs.end());
    for (double h : hs)
      if (levels_.empty() || h - levels_.back() > tol_) levels_.push_back(h);
  }

  // Level index of a height, or -1 when it is not within tol of any level.
  int level_of(double h) const {
    auto it = std::lower_bound(levels_.begin(), levels_.end(), h - tol_);
    if (it != levels_.end() && std::fabs(*it - h) <= tol_) return static_cast<int>(it - levels_.begin());
    return -1;
  }

  void build_events(const std::vector<Point>& path, Point nrm) {
    events_.clear();
    std::vector<Letter> letters;
    int node = WordTrie::root;
    const std::size_t n = path.size();
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = dot(nrm, path[i]);
    for (std::size_t i = 0; i < n; ++i) {
      const int li = level_of(h[i]);
      if (li >= 0) events_.push_back({static_cast<double>(i), li, path[i], node});
      if (i + 1 == n) break;
      const double ha = h[i], hb = h[i + 1];
      const int lb = level_of(hb);
      // Levels strictly between the two endpoint heights.
      const double lo = std::min(ha, hb), hi = std::max(ha, hb);
      auto first = std::upper_bound(levels_.begin(), levels_.end(), lo + tol_);
      auto last = std::lower_bound(levels_.begin(), levels_.end(), hi - tol_);
      std::vector<int> crossed;
      for (auto it = first; it < last; ++it) {
        const int k = static_cast<int>(it - levels_.begin());
        if (k == li || k == lb) continue;
        crossed.push_back(k);
      }
      if (hb < ha) std::reverse(crossed.begin(), crossed.end());
      for (int k : crossed) {
        const double t = (levels_[k] - ha) / (hb - ha);
        if (!(t > 0.0 && t < 1.0)) continue;
        const Point p = lerp(path[i], path[i + 1], t);
        if (p == path[i] || p == path[i + 1]) continue;
        letters.clear();
        append_segment_letters(cuts_, path[i], p, letters);
        int m = node;
        for (Letter l : letters) m = trie_.push(m, l);
        events_.push_back({static_cast<double>(i) + t, k, p, m});
      }
      letters.clear();
      append_segment_letters(cuts_, path[i], path[i + 1], letters);
      for (Letter l : letters) node = trie_.push(node, l);
    }
  }

  // Some vertex strictly between c and d lies farther than tol from [c,d].
  bool deviates(const std::vector<Point>& path, const Event& c, const Event& d) const {
    const auto first = static_cast<std::size_t>(std::floor(c.u)) + 1;
    for (std::size_t k = first; static_cast<double>(k) < d.u && k < path.size(); ++k)
      if (point_segment_distance(path[k], c.p, d.p) > tol_) return true;
    return false;
  }

  bool loop_is_trivial(const std::vector<Point>& path, const Event& c, const Event& d) const {
    std::vector<Point> loop{c.p};
    const auto first = static_cast<std::size_t>(std::floor(c.u)) + 1;
    for (std::size_t k = first; static_cast<double>(k) < d.u && k < path.size(); ++k) loop.push_back(path[k]);
    loop.push_back(d.p);
    loop.push_back(c.p);
    return free_reduce(crossing_word_unchecked(loop, cuts_)).empty();
  }

  const PlanarDomain& domain_;
  const CutSystem& cuts_;
  double tol_;
  std::vector<Point> domain_vertices_;
  std::vector<double> levels_;
  std::vector<Event> events_;
  WordTrie trie_;
};

inline std::vector<Point> splice(const std::vector<Point>& path, const Event& c, const Event& d) {
  std::vector<Point> out;
  out.reserve(path.size());
  for (std::size_t k = 0; static_cast<double>(k) <= c.u && k < path.size(); ++k) out.push_back(path[k]);
  if (out.empty() || !(out.back() == c.p)) out.push_back(c.p);
  if (!(out.back() == d.p)) out.push_back(d.p);
  for (std::size_t k = static_cast<std::size_t>(std::floor(d.u)) + 1; k < path.size(); ++k)
    if (static_cast<double>(k) > d.u && !(out.back() == path[k])) out.push_back(path[k]);
  return out;
}

inline Point direction_of(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Repeatedly applies the leftmost replacement until none remains.
inline long reduce_in_place(const PlanarDomain& domain, std::vector<Point>& path, Point dir, std::optional<Point> only,
                            const CutSystem& cuts, double tol, long budget,
                            const std::function<void(const Polyline&, const Polyline&)>& observer) {
  ChordScanner scanner(domain, cuts, tol);
  long count = 0;
  while (path.size() >= 2) {
    auto hit = scanner.find(path, dir, only);
    if (!hit) break;
    std::vector<Point> next = splice(path, hit->first, hit->second);
    if (observer) observer(Polyline(path), Polyline(next));
    path = std::move(next);
    if (++count > budget) throw NonConvergenceError("replacement budget exceeded in one direction");
    if (only && path.size() < 2) break;
  }
  return count;
}

inline double angular_gap(double a, double b) {
  double d = std::fmod(std::fabs(a - b), std::numbers::pi);
  return std::min(d, std::numbers::pi - d);
}

// Moves `angle` off every edge direction of the domain and path by steps of eps.
inline double nudge_angle(double angle, const PlanarDomain& domain, const std::vector<Point>& path, double eps) {
  std::vector<double> dirs;
  for (const auto& [a, b] : domain.edges()) dirs.push_back(std::atan2(b.y - a.y, b.x - a.x));
  for (std::size_t i = 1; i < path.size(); ++i)
    dirs.push_back(std::atan2(path[i].y - path[i - 1].y, path[i].x - path[i - 1].x));
  for (int iter = 0; iter < 16; ++iter) {
    bool close = false;
    for (double d : dirs)
      if (angular_gap(angle, d) < eps) close = true;
    if (!close) break;
    angle += eps;
  }
  return angle;
}

inline double resolve_tol(const PlanarDomain& domain, double tol) { return tol > 0.0 ? tol : domain.tolerance(); }

}  // namespace detail

/// True iff no subpath between two points on a critical line parallel to
/// `angle` can be replaced by the chord joining them.
inline bool is_reduced(const PlanarDomain& domain, const Polyline& path, double angle, const CutSystem& cuts,
                       double tol = 0.0) {
  const Polyline p = path.normalized();
  if (p.size() < 2) return true;
  detail::ChordScanner scanner(domain, cuts, detail::resolve_tol(domain, tol));
  return !scanner.find(p.vertices(), detail::direction_of(angle), std::nullopt).has_value();
}

/// Reduction with respect to one direction: leftmost-first chord replacement
/// until the path is reduced for `angle`.
inline Polyline reduce_direction(const PlanarDomain& domain, const Polyline& path, double angle, const CutSystem& cuts,
                                 const SolverOptions& opts = {}) {
  std::vector<Point> pts = path.normalized().vertices();
  detail::reduce_in_place(domain, pts, detail::direction_of(angle), std::nullopt, cuts,
                          detail::resolve_tol(domain, opts.tol), opts.max_replacements, opts.observer);
  return Polyline(std::move(pts));
}

struct GeodesicResult {
  ParamPath path;
  ReductionReport report;
};

/// Sweeps the schedule directions (and the vertex directions) until a full
/// pass makes no replacement.  The result is parameterized by total
/// oscillation.
inline GeodesicResult oscillatory_geodesic(const PlanarDomain& domain, const Polyline& path,
                                           const DirectionSchedule& schedule, const CutSystem& cuts,
                                           const SolverOptions& opts = {}) {
  const double tol = detail::resolve_tol(domain, opts.tol);
  for (Point p : path.vertices())
    if (!contains_point_tol(domain, p, tol)) throw PreconditionError("path vertex lies outside the domain");
  ReductionReport report;
  std::vector<Point> cur = path.normalized().vertices();
  report.initial_T = total_oscillation(Polyline(cur), schedule);
  if (cur.size() == 1) {
    report.converged = true;
    report.final_T = 0.0;
    return {ParamPath::constant(cur.front()), report};
  }
  const auto domain_vertices = domain.vertices();
  long budget = opts.max_replacements;
  auto run = [&](Point dir, std::optional<Point> only) {
    const long n = detail::reduce_in_place(domain, cur, dir, only, cuts, tol, budget, opts.observer);
    budget -= n;
    return n;
  };
  try {
    for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
      long changed = 0;
      for (const auto& pair : schedule.pairs) {
        if (cur.size() < 2) break;
        const double angle = detail::nudge_angle(pair.angle(), domain, cur, opts.eps_angle);
        changed += run(detail::direction_of(angle), std::nullopt);
      }
      if (opts.vertex_directions) {
        for (std::size_t i = 0; i < cur.size() && cur.size() >= 2; ++i) {
          std::vector<Point> targets = domain_vertices;
          for (std::size_t j = 0; j < cur.size(); ++j)
            if (j + 1 < i || j > i + 1) targets.push_back(cur[j]);
          for (Point w : targets) {
            if (i >= cur.size()) break;
            const Point v = cur[i];
            if (w == v) continue;
            const Point d = w - v;
            changed += run((1.0 / norm(d)) * d, v);
          }
        }
      }
      report.sweeps = sweep;
      report.replacements += static_cast<int>(changed);
      report.sweep_T.push_back(total_oscillation(Polyline(cur), schedule));
      if (changed == 0) {
        report.converged = true;
        break;
      }
    }
  } catch (const NonConvergenceError& e) {
    report.final_T = total_oscillation(Polyline(cur), schedule);
    throw GeodesicNonConvergence(e.what(), Polyline(cur), report);
  }
  Polyline out(cur);
  report.final_T = total_oscillation(out, schedule);
  if (!report.converged)
    throw GeodesicNonConvergence("no converged sweep within " + std::to_string(opts.max_sweeps) + " sweeps", out,
                                 report);
  if (out.is_constant()) return {ParamPath::constant(out.front()), report};
  return {parameterize_by_T(out, schedule, opts.samples), report};
}

/// Grid of points: row k is the homotopy at step k, column j one aligned
/// parameter.  Row 0 samples `a`, the last row samples `b`.
using HomotopyGrid = std::vector<std::vector<Point>>;

namespace detail {

struct LevelPiece {
  int level_from;
  int level_to;
  double u0, u1;  // fractional vertex parameters
};

// Crossing sequence of the critical levels along a path, grouped so that
// consecutive events on one level form a single stretch.
inline std::vector<std::pair<int, std::pair<double, double>>> level_groups(const std::vector<Point>& path,
                                                                           const std::vector<double>& levels,
                                                                           Point nrm, double tol) {
  auto level_of = [&](double h) {
    auto it = std::lower_bound(levels.begin(), levels.end(), h - tol);
    if (it != levels.end() && std::fabs(*it - h) <= tol) return static_cast<int>(it - levels.begin());
    return -1;
  };
  std::vector<std::pair<int, double>> events;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double ha = dot(nrm, path[i]);
    events.emplace_back(level_of(ha), static_cast<double>(i));
    if (i + 1 == path.size()) break;
    const double hb = dot(nrm, path[i + 1]);
    std::vector<std::pair<int, double>> mid;
    for (int k = 0; k < static_cast<int>(levels.size()); ++k) {
      const double L = levels[k];
      if (std::fabs(L - ha) <= tol || std::fabs(L - hb) <= tol) continue;
      if ((L > ha) != (L > hb)) mid.emplace_back(k, static_cast<double>(i) + (L - ha) / (hb - ha));
    }
    std::sort(mid.begin(), mid.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
    events.insert(events.end(), mid.begin(), mid.end());
  }
  std::vector<std::pair<int, std::pair<double, double>>> groups;
  for (const auto& [lv, u] : events) {
    if (!groups.empty() && groups.back().first == lv) groups.back().second.second = u;
    else groups.push_back({lv, {u, u}});
  }
  return groups;
}

inline Point at_param(const std::vector<Point>& path, double u) { return Polyline(path).at_param(u); }

}  // namespace detail

/// Homotopy whose every column is a segment parallel to `angle`, obtained by
/// matching the two paths' crossings of the critical lines in order.
inline HomotopyGrid straight_line_homotopy(const PlanarDomain& domain, const Polyline& a, const Polyline& b,
                                           double angle, const CutSystem& cuts, int steps, int samples = 64,
                                           double tol = 0.0) {
  tol = detail::resolve_tol(domain, tol);
  if (steps < 2 || samples < 2) throw PreconditionError("steps and samples must be at least 2");
  if (!(a.front() == b.front()) || !(a.back() == b.back()))
    throw PreconditionError("paths do not share endpoints");
  const Polyline pa = a.normalized(), pb = b.normalized();
  if (!is_homotopic_rel_endpoints(domain, pa, pb, cuts)) throw PreconditionError("paths are not homotopic");
  if (!is_reduced(domain, pa, angle, cuts, tol) || !is_reduced(domain, pb, angle, cuts, tol))
    throw PreconditionError("paths are not reduced for the given direction");

  const Point dir = detail::direction_of(angle);
  const Point nrm{-dir.y, dir.x};
  std::vector<double> hs;
  for (Point p : domain.vertices()) hs.push_back(dot(nrm, p));
  for (Point p : pa.vertices()) hs.push_back(dot(nrm, p));
  for (Point p : pb.vertices()) hs.push_back(dot(nrm, p));
  std::sort(hs.begin(), hs.end());
  std::vector<double> levels;
  for (double h : hs)
    if (levels.empty() || h - levels.back() > tol) levels.push_back(h);

  const auto ga = detail::level_groups(pa.vertices(), levels, nrm, tol);
  const auto gb = detail::level_groups(pb.vertices(), levels, nrm, tol);
  if (ga.size() != gb.size()) throw AlignmentError("critical-line crossing sequences differ in length");
  for (std::size_t k = 0; k < ga.size(); ++k)
    if (ga[k].first != gb[k].first) throw AlignmentError("critical-line crossing sequences differ");

  // Aligned parameter: group k occupies [2k, 2k+1] (a stretch on one level),
  // and [2k+1, 2k+2] is the transit to the next level.
  const std::size_t G = ga.size();
  const double span = static_cast<double>(2 * G - 1);
  auto locate = [&](const std::vector<std::pair<int, std::pair<double, double>>>& g, const Polyline& path,
                    double s) -> Point {
    const auto k = std::min(static_cast<std::size_t>(std::floor(s / 2.0)), G - 1);
    const double r = s - 2.0 * static_cast<double>(k);
    const auto [u0, u1] = g[k].second;
    if (r <= 1.0 || k + 1 == G) {
      // Along the stretch by normalized arc length.
      const Polyline piece = path.subpath(u0, u1);
      return piece.at_arclength(std::min(r, 1.0) * piece.length());
    }
    // Transit: choose the point at the interpolated height.
    const double v0 = u1, v1 = g[k + 1].second.first;
    const double h0 = dot(nrm, path.at_param(v0)), h1 = dot(nrm, path.at_param(v1));
    const double target = h0 + (r - 1.0) * (h1 - h0);
    double lo = v0, hi = v1;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double hm = dot(nrm, path.at_param(mid));
      if ((hm - target) * (h1 - h0) < 0.0) lo = mid;
      else hi = mid;
    }
    return path.at_param(0.5 * (lo + hi));
  };

  HomotopyGrid grid(static_cast<std::size_t>(steps), std::vector<Point>(static_cast<std::size_t>(samples)));
  for (int j = 0; j < samples; ++j) {
    const double s = span * static_cast<double>(j) / static_cast<double>(samples - 1);
    Point pa_j = locate(ga, pa, s), pb_j = locate(gb, pb, s);
    if (j == 0) pa_j = pb_j = pa.front();
    if (j == samples - 1) pa_j = pb_j = pa.back();
    if (!contains_point_tol(domain, pa_j, tol) || !contains_point_tol(domain, pb_j, tol) ||
        !chord_in_domain(domain, pa_j, pb_j, tol))
      throw AlignmentError("interpolating segment leaves the domain at sample " + std::to_string(j));
    for (int k = 0; k < steps; ++k) {
      const double f = static_cast<double>(k) / static_cast<double>(steps - 1);
      grid[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
          k == 0 ? pa_j : (k == steps - 1 ? pb_j : lerp(pa_j, pb_j, f));
    }
  }
  return grid;
}

/// sup_t d(a(min(t, T_a)), b(min(t, T_b))) over a uniform grid plus every
/// knot value of either path (and the next representable value above it).
inline double closeness(const ParamPath& a, const ParamPath& b, int grid = 512) {
  const double ta = a.total(), tb = b.total();
  std::vector<double> ts;
  const double top = std::max(ta, tb);
  for (int k = 0; k <= grid; ++k) ts.push_back(top * k / grid);
  for (const ParamPath* p : {&a, &b})
    for (const auto& [s, t] : p->knots()) {
      (void)s;
      ts.push_back(t);
      ts.push_back(std::nextafter(t, 2.0));
    }
  double eps = 0.0;
  for (double t : ts) eps = std::max(eps, dist(a.at_T(std::min(t, ta)), b.at_T(std::min(t, tb))));
  return eps;
}

struct ProbeRow {
  double delta = 0.0;
  double epsilon = 0.0;
};

/// For each delta, perturbs both endpoints within a delta-ball (joined to
/// the original by an in-domain segment), recomputes the geodesic, and
/// records the largest closeness gap over the trials.
inline std::vector<ProbeRow> continuity_probe(const PlanarDomain& domain, const Polyline& path,
                                              const DirectionSchedule& schedule, const CutSystem& cuts,
                                              const std::vector<double>& deltas, int trials,
                                              std::uint64_t seed = 0, const SolverOptions& opts = {}) {
  const auto base = oscillatory_geodesic(domain, path, schedule, cuts, opts).path;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto jitter = [&](Point p, double delta) {
    if (delta == 0.0) return p;
    for (int attempt = 0; attempt < 200; ++attempt) {
      const double r = delta * std::sqrt(unit(rng));
      const double th = 2.0 * std::numbers::pi * unit(rng);
      const Point q{p.x + r * std::cos(th), p.y + r * std::sin(th)};
      if (contains_point(domain, q) && chord_in_domain(domain, p, q)) return q;
    }
    throw SamplingError("endpoint perturbation left the domain after 200 attempts");
  };
  std::vector<ProbeRow> rows;
  for (double delta : deltas) {
    if (!(delta >= 0.0)) throw PreconditionError("perturbation radius must be nonnegative");
    ProbeRow row{delta, 0.0};
    for (int k = 0; k < trials; ++k) {
      const Point s = jitter(path.front(), delta);
      const Point e = jitter(path.back(), delta);
      std::vector<Point> pts{s};
      for (Point p : path.vertices()) pts.push_back(p);
      pts.push_back(e);
      const Polyline perturbed = Polyline(std::move(pts)).normalized();
      const auto other = oscillatory_geodesic(domain, perturbed, schedule, cuts, opts).path;
      row.epsilon = std::max(row.epsilon, closeness(base, other));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace osc

#endif  // OSC_GEODESIC_HPP
