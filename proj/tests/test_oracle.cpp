#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "fixtures.hpp"

using namespace osc;

namespace {

// Shortest visibility-graph path (up to `hops` segments through domain
// vertices) homotopic to `path`, found by exhaustive enumeration.
Polyline visibility_brute_force(const PlanarDomain& d, const Polyline& path, const CutSystem& cs, int hops) {
  const auto verts = d.vertices();
  const Point s = path.front(), e = path.back();
  double best = std::numeric_limits<double>::infinity();
  std::vector<Point> best_pts, cur{s};
  std::function<void(double)> go = [&](double len) {
    if (len >= best) return;
    if (chord_in_domain(d, cur.back(), e)) {
      cur.push_back(e);
      const Polyline cand(cur);
      if (len + dist(cur[cur.size() - 2], e) < best && is_homotopic_rel_endpoints(d, cand, path, cs)) {
        best = len + dist(cur[cur.size() - 2], e);
        best_pts = cur;
      }
      cur.pop_back();
    }
    if (static_cast<int>(cur.size()) > hops) return;
    for (Point v : verts) {
      if (v == cur.back() || !chord_in_domain(d, cur.back(), v)) continue;
      cur.push_back(v);
      go(len + dist(cur[cur.size() - 2], v));
      cur.pop_back();
    }
  };
  go(0.0);
  return Polyline(best_pts);
}

// Cancels backtracks at random positions until none remain.
EdgePath random_order_cancel(const EdgePath& p, std::mt19937_64& rng) {
  EdgePath out = p;
  for (;;) {
    std::vector<std::size_t> spots;
    for (std::size_t i = 0; i + 1 < out.steps.size(); ++i)
      if (out.steps[i].edge == out.steps[i + 1].edge && out.steps[i].dir == -out.steps[i + 1].dir) spots.push_back(i);
    if (spots.empty()) return out;
    std::uniform_int_distribution<std::size_t> pick(0, spots.size() - 1);
    const auto at = static_cast<std::ptrdiff_t>(spots[pick(rng)]);
    out.steps.erase(out.steps.begin() + at, out.steps.begin() + at + 2);
  }
}

}  // namespace

TEST(Oracle, ConvexGivesSegment) {
  const auto sq = fx::unit_square();
  const Polyline out = shortest_homotopic_path(sq, Polyline{{0.1, 0.1}, {0.9, 0.3}, {0.2, 0.8}}, build_cut_system(sq));
  EXPECT_EQ(out, (Polyline{{0.1, 0.1}, {0.2, 0.8}}));
}

TEST(Oracle, AboveHoleMatchesVisibilityBruteForce) {
  const auto d = fx::square_with_hole();
  const auto cs = build_cut_system(d);
  const Polyline above{{0.1, 0.5}, {0.3, 0.9}, {0.8, 0.8}, {0.9, 0.5}};
  const Polyline out = shortest_homotopic_path(d, above, cs);
  EXPECT_EQ(out, (Polyline{{0.1, 0.5}, {0.4, 0.6}, {0.6, 0.6}, {0.9, 0.5}}));
  const Polyline brute = visibility_brute_force(d, above, cs, 4);
  EXPECT_NEAR(out.length(), brute.length(), 1e-12);
  EXPECT_LE(frechet_distance(out, brute), 1e-12);
}

TEST(Oracle, ShortestInputIsFixed) {
  const auto d = fx::square_with_hole();
  const auto cs = build_cut_system(d);
  const Polyline shortest{{0.1, 0.5}, {0.4, 0.6}, {0.5, 0.6}, {0.6, 0.6}, {0.9, 0.5}};
  EXPECT_EQ(frechet_distance(shortest_homotopic_path(d, shortest, cs), shortest), 0.0);
}

TEST(Oracle, MatchesBruteForceOnFixtures) {
  std::mt19937_64 rng(5);
  const auto all = fx::domains();
  for (std::size_t i = 0; i < 11; ++i) {
    const auto& [name, d] = all[i];
    const auto cs = build_cut_system(d);
    for (int k = 0; k < 3; ++k) {
      const Polyline p = fx::random_path(d, rng, 3);
      const Polyline out = shortest_homotopic_path(d, p, cs);
      EXPECT_EQ(reduced_word(out, cs), reduced_word(p, cs)) << name;
      EXPECT_LE(out.length(), p.length() * (1 + 1e-12)) << name;
      const Polyline brute = visibility_brute_force(d, p, cs, 3);
      if (brute.size() >= 2) {
        EXPECT_LE(out.length(), brute.length() + 1e-12 * d.diameter()) << name;
      }
    }
  }
}

TEST(Oracle, NeverLonger) {
  std::mt19937_64 rng(6);
  for (const auto& [name, d] : fx::domains()) {
    const auto cs = build_cut_system(d);
    const auto tri = triangulate(d);
    for (int k = 0; k < 10; ++k) {
      const Polyline p = fx::random_path(d, rng, 8);
      const Polyline out = shortest_homotopic_path(d, p, cs, &tri);
      EXPECT_LE(out.length(), p.length() * (1 + 1e-12)) << name;
      EXPECT_EQ(reduced_word(out, cs), reduced_word(p, cs)) << name;
      for (std::size_t j = 1; j < out.size(); ++j) EXPECT_TRUE(chord_in_domain(d, out[j - 1], out[j])) << name;
    }
  }
}

TEST(Graph, Validation) {
  EXPECT_NO_THROW(fx::theta_graph());
  EXPECT_NO_THROW(fx::grid_graph(4));
  std::vector<Point> v{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  EXPECT_THROW(EmbeddedGraph(v, {{0, 1, Polyline{v[0], v[1]}}, {2, 3, Polyline{v[2], v[3]}}}), GeometryError);
  EXPECT_THROW(EmbeddedGraph(v, {{0, 2, Polyline{v[0], v[2]}}}), GeometryError);
  EXPECT_THROW(EmbeddedGraph(v, {{0, 5, Polyline{v[0], v[1]}}}), GeometryError);
  EXPECT_THROW(EmbeddedGraph(v, {{0, 1, Polyline{v[0], v[2]}}}), GeometryError);
}

TEST(Graph, ReduceExamples) {
  const auto g = fx::theta_graph();
  EXPECT_EQ(reduce_edge_path(g, EdgePath{0, {{0, 1}, {0, -1}}}), (EdgePath{0, {}}));
  // a b b^-1 c with a = e0, b = e1 reversed, c = e2 reversed.
  const EdgePath p{0, {{0, 1}, {1, -1}, {1, 1}, {2, -1}}};
  EXPECT_EQ(reduce_edge_path(g, p), (EdgePath{0, {{0, 1}, {2, -1}}}));
  const EdgePath r{0, {{0, 1}, {1, -1}}};
  EXPECT_EQ(reduce_edge_path(g, r), r);
  EXPECT_THROW(reduce_edge_path(g, EdgePath{0, {{0, 1}, {1, 1}}}), PreconditionError);
}

TEST(Graph, ReductionIsConfluent) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> len(0, 60);
  const auto g = fx::grid_graph(3);
  for (int k = 0; k < 1000; ++k) {
    const EdgePath p = fx::random_walk(g, rng, len(rng));
    const EdgePath r = reduce_edge_path(g, p);
    EXPECT_EQ(random_order_cancel(p, rng), r);
    EXPECT_EQ(end_vertex(g, r), end_vertex(g, p));
  }
}

TEST(Graph, GeodesicExamples) {
  const auto g = fx::theta_graph();
  const auto sched = make_schedule(64, BBox{-0.1, -1.1, 2.1, 1.1});
  const auto trivial = graph_oscillatory_geodesic(g, EdgePath{0, {{0, 1}, {0, -1}}}, sched);
  EXPECT_TRUE(trivial.geometry.is_constant());
  EXPECT_EQ(trivial.total, 0.0);

  const EdgePath bar{0, {{1, 1}}};
  const auto direct = graph_oscillatory_geodesic(g, bar, sched);
  EXPECT_EQ(direct.geometry, g.edges()[1].geometry);
  EXPECT_EQ(direct.violations, 0);

  std::mt19937_64 rng(2);
  const EdgePath inflated = inflate_with_spurs(g, bar, 3, rng);
  const auto again = graph_oscillatory_geodesic(g, inflated, sched);
  EXPECT_EQ(again.geometry, direct.geometry);
  EXPECT_EQ(again.total, direct.total);
  EXPECT_GE(total_oscillation(edge_path_geometry(g, inflated), sched), direct.total);
}

TEST(Graph, SpursNeverDecreaseTotal) {
  std::mt19937_64 rng(13);
  const auto g = fx::grid_graph(4);
  const auto sched = make_schedule(64, BBox{0, 0, 3, 3});
  for (int k = 0; k < 100; ++k) {
    const EdgePath p = reduce_edge_path(g, fx::random_walk(g, rng, 8));
    const double t = total_oscillation(edge_path_geometry(g, p), sched);
    const EdgePath q = inflate_with_spurs(g, p, 2, rng);
    EXPECT_GE(total_oscillation(edge_path_geometry(g, q), sched), t);
  }
}
