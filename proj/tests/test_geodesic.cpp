#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"

using namespace osc;

namespace {

constexpr double kVertical = std::numbers::pi / 2;

const Polyline spur{{0.2, 0.3}, {0.5, 0.3}, {0.5, 0.7}, {0.5, 0.3}, {0.8, 0.3}};

GeodesicResult solve(const PlanarDomain& d, const Polyline& p, int n = 64) {
  return oscillatory_geodesic(d, p, make_schedule(n, d.bbox()), build_cut_system(d));
}

bool all_vertical(const HomotopyGrid& grid) {
  for (std::size_t j = 0; j < grid.front().size(); ++j) {
    const Point a = grid.front()[j], b = grid.back()[j];
    if (std::fabs(a.x - b.x) > 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST(Geodesic, IsReducedExamples) {
  const auto sq = fx::unit_square();
  const auto none = build_cut_system(sq);
  for (double a : {0.0, 0.4, kVertical, 2.0})
    EXPECT_TRUE(is_reduced(sq, Polyline{{0.1, 0.2}, {0.8, 0.9}}, a, none)) << a;
  EXPECT_FALSE(is_reduced(sq, spur, kVertical, none));
  EXPECT_FALSE(is_reduced(sq, spur, 0.0, none));
  const auto holed = fx::square_with_hole();
  const auto cs = build_cut_system(holed);
  const Polyline corner_path{{0.1, 0.5}, {0.4, 0.6}, {0.6, 0.6}, {0.9, 0.5}};
  for (double a : {0.0, 0.3, kVertical, 2.5}) EXPECT_TRUE(is_reduced(holed, corner_path, a, cs)) << a;
}

TEST(Geodesic, ReduceDirectionExamples) {
  const auto sq = fx::unit_square();
  const auto none = build_cut_system(sq);
  const Polyline straight{{0.1, 0.2}, {0.8, 0.9}};
  EXPECT_EQ(reduce_direction(sq, straight, 0.3, none), straight);
  const Polyline flat = reduce_direction(sq, spur, kVertical, none);
  EXPECT_LE(frechet_distance(flat, Polyline{{0.2, 0.3}, {0.8, 0.3}}), 1e-12);
  EXPECT_TRUE(is_reduced(sq, flat, kVertical, none));

  const auto holed = fx::square_with_hole();
  const auto cs = build_cut_system(holed);
  const Polyline bulge{{0.1, 0.8}, {0.5, 0.95}, {0.9, 0.8}};
  const Polyline out = reduce_direction(holed, bulge, 0.0, cs);
  EXPECT_LE(frechet_distance(out, shortest_homotopic_path(holed, bulge, cs)), 1e-12);
  EXPECT_LE(frechet_distance(out, Polyline{{0.1, 0.8}, {0.9, 0.8}}), 1e-12);
}

TEST(Geodesic, ReduceDirectionKeepsClassAndOscillation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& [name, d] : fx::domains()) {
    const auto cs = build_cut_system(d);
    const auto sched = make_schedule(32, d.bbox());
    for (int k = 0; k < 3; ++k) {
      const Polyline p = fx::random_path(d, rng, 6);
      const double angle = std::numbers::pi * u(rng);
      const Polyline r = reduce_direction(d, p, angle, cs);
      EXPECT_EQ(reduced_word(r, cs), reduced_word(p, cs)) << name;
      EXPECT_TRUE(is_reduced(d, r, angle, cs)) << name;
      const BBox b = d.bbox();
      for (double c : {0.2, 0.5, 0.8}) {
        const ParallelLinePair pair(angle, (b.ymin + c * b.height()) * std::cos(angle) - (b.xmin + c * b.width()) * std::sin(angle),
                                    0.1 * d.diameter());
        EXPECT_LE(oscillation(r, pair), oscillation(p, pair) + 1e-12) << name;
      }
    }
  }
}

TEST(Geodesic, SolverExamples) {
  const auto sq = fx::unit_square();
  const auto r = solve(sq, Polyline{{0.1, 0.1}, {0.9, 0.2}, {0.5, 0.9}, {0.8, 0.7}});
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(frechet_distance(r.path.geometry(), Polyline{{0.1, 0.1}, {0.8, 0.7}}), 1e-9);
  const auto c = solve(sq, Polyline{{0.4, 0.4}});
  EXPECT_TRUE(c.path.is_constant());
  EXPECT_EQ(c.path.geometry().front(), (Point{0.4, 0.4}));

  const auto holed = fx::square_with_hole();
  const auto cs = build_cut_system(holed);
  const Polyline above{{0.1, 0.5}, {0.2, 0.9}, {0.5, 0.8}, {0.7, 0.95}, {0.9, 0.5}};
  const auto g = solve(holed, above);
  const Polyline expected{{0.1, 0.5}, {0.4, 0.6}, {0.6, 0.6}, {0.9, 0.5}};
  EXPECT_LE(frechet_distance(g.path.geometry(), expected), 1e-6 * holed.diameter());
  EXPECT_LE(frechet_distance(g.path.geometry(), shortest_homotopic_path(holed, above, cs)), 1e-6 * holed.diameter());
}

TEST(Geodesic, SolverReportIsConsistent) {
  std::mt19937_64 rng(17);
  for (const auto& [name, d] : fx::domains()) {
    const auto cs = build_cut_system(d);
    const auto sched = make_schedule(64, d.bbox());
    for (int k = 0; k < 2; ++k) {
      const Polyline p = fx::random_path(d, rng, 5);
      const auto r = oscillatory_geodesic(d, p, sched, cs);
      EXPECT_TRUE(r.report.converged) << name;
      EXPECT_LE(r.report.final_T, r.report.initial_T + 1e-12) << name;
      double prev = r.report.initial_T;
      for (double t : r.report.sweep_T) {
        EXPECT_LE(t, prev + 1e-12) << name;
        prev = t;
      }
      EXPECT_EQ(reduced_word(r.path.geometry(), cs), reduced_word(p, cs)) << name;
      const auto again = oscillatory_geodesic(d, r.path.geometry(), sched, cs);
      EXPECT_EQ(again.report.replacements, 0) << name;
    }
  }
}

TEST(Geodesic, ObserverSeesNonIncreasingOscillation) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto d = fx::two_holes();
  const auto cs = build_cut_system(d);
  std::vector<ParallelLinePair> audit;
  for (int k = 0; k < 32; ++k) audit.emplace_back(std::numbers::pi * u(rng), -1.0 + 3.0 * u(rng), 0.02 + 0.5 * u(rng));
  int replacements = 0, violations = 0;
  SolverOptions opts;
  opts.observer = [&](const Polyline& before, const Polyline& after) {
    ++replacements;
    for (const auto& pair : audit)
      if (oscillation(after, pair) > oscillation(before, pair) + 1e-12) ++violations;
  };
  for (int k = 0; k < 5; ++k) oscillatory_geodesic(d, fx::random_path(d, rng, 6), make_schedule(64, d.bbox()), cs, opts);
  EXPECT_GT(replacements, 0);
  EXPECT_EQ(violations, 0);
}

TEST(Geodesic, SubpathsAreReduced) {
  std::mt19937_64 rng(29);
  const auto d = fx::three_holes();
  const auto cs = build_cut_system(d);
  const auto sched = make_schedule(64, d.bbox());
  for (int k = 0; k < 3; ++k) {
    const Polyline g = oscillatory_geodesic(d, fx::random_path(d, rng, 6), sched, cs).path.geometry();
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        const Polyline sub(std::vector<Point>(g.vertices().begin() + static_cast<std::ptrdiff_t>(i),
                                              g.vertices().begin() + static_cast<std::ptrdiff_t>(j) + 1));
        for (const auto& pair : sched.pairs) EXPECT_TRUE(is_reduced(d, sub, pair.angle(), cs));
      }
  }
}

TEST(Geodesic, IsometryEquivariance) {
  std::mt19937_64 rng(31);
  const std::vector<Isometry> isos{{std::numbers::pi / 2, {1, 2}, false}, {std::numbers::pi, {}, false}, {0.0, {}, true}};
  const auto all = fx::domains();
  for (std::size_t i = 0; i < all.size(); i += 3) {
    const auto& [name, d] = all[i];
    const Polyline p = fx::random_path(d, rng, 5);
    const Polyline g = solve(d, p).path.geometry();
    for (const auto& iso : isos) {
      const auto di = apply_isometry(iso, d);
      const Polyline gi = solve(di, apply_isometry(iso, p)).path.geometry();
      EXPECT_LE(frechet_distance(apply_isometry(iso, g), gi), 1e-6 * d.diameter()) << name;
    }
  }
}

TEST(Geodesic, SolverRejectsOutsidePaths) {
  const auto d = fx::square_with_hole();
  EXPECT_THROW(solve(d, Polyline{{0.1, 0.1}, {1.5, 0.5}}), PreconditionError);
}

TEST(Geodesic, NonConvergenceCarriesBestPath) {
  const auto d = fx::square_with_hole();
  SolverOptions opts;
  opts.max_sweeps = 1;
  const Polyline p{{0.1, 0.1}, {0.9, 0.2}, {0.8, 0.9}, {0.2, 0.8}, {0.3, 0.15}};
  try {
    oscillatory_geodesic(d, p, make_schedule(64, d.bbox()), build_cut_system(d), opts);
    FAIL() << "expected non-convergence";
  } catch (const GeodesicNonConvergence& e) {
    EXPECT_EQ(e.exit_code(), 3);
    EXPECT_EQ(e.report().sweeps, 1);
    EXPECT_FALSE(e.best().empty());
  }
}

TEST(Geodesic, StraightLineHomotopyExamples) {
  const auto sq = fx::unit_square();
  const auto none = build_cut_system(sq);
  const Polyline a{{0.1, 0.1}, {0.3, 0.2}, {0.5, 0.6}, {0.9, 0.8}};
  const auto same = straight_line_homotopy(sq, a, a, kVertical, none, 5, 16);
  for (const auto& row : same) EXPECT_EQ(row, same.front());

  // Monotone staircases: every column is vertical and inside.
  const Polyline s1{{0.1, 0.1}, {0.4, 0.1}, {0.4, 0.5}, {0.9, 0.5}, {0.9, 0.9}};
  const Polyline s2{{0.1, 0.1}, {0.1, 0.3}, {0.6, 0.3}, {0.6, 0.8}, {0.9, 0.9}};
  const Polyline r1 = reduce_direction(sq, s1, kVertical, none), r2 = reduce_direction(sq, s2, kVertical, none);
  const auto grid = straight_line_homotopy(sq, r1, r2, kVertical, none, 9, 33);
  EXPECT_TRUE(all_vertical(grid));
  for (const auto& row : grid)
    for (Point p : row) EXPECT_TRUE(contains_point(sq, p));
  EXPECT_EQ(grid.front().front(), r1.front());
  EXPECT_EQ(grid.back().back(), r2.back());

  const auto holed = fx::square_with_hole();
  const auto cs = build_cut_system(holed);
  const Polyline above{{0.1, 0.5}, {0.4, 0.6}, {0.6, 0.6}, {0.9, 0.5}};
  const Polyline below{{0.1, 0.5}, {0.4, 0.4}, {0.6, 0.4}, {0.9, 0.5}};
  EXPECT_THROW(straight_line_homotopy(holed, above, below, kVertical, cs, 5, 16), PreconditionError);
  EXPECT_THROW(straight_line_homotopy(sq, spur, Polyline{{0.2, 0.3}, {0.8, 0.3}}, kVertical, none, 5, 16),
               PreconditionError);
}

TEST(Geodesic, ProbeExamples) {
  const auto sq = fx::unit_square();
  const auto none = build_cut_system(sq);
  const auto sched = make_schedule(64, sq.bbox());
  const Polyline p{{0.2, 0.2}, {0.5, 0.8}, {0.8, 0.3}};
  const auto rows = continuity_probe(sq, p, sched, none, {1e-2, 1e-3, 1e-4, 0.0}, 10, 1);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[3].epsilon, 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].epsilon, rows[i - 1].epsilon) << rows[i].delta;
  for (const auto& r : rows) EXPECT_LE(r.epsilon, dist(p.front(), p.back()) + 2.0 * r.delta);
}

TEST(Geodesic, ClosenessOfIdenticalPaths) {
  const auto sched = make_schedule(64, BBox{0, 0, 1, 1});
  const ParamPath a = parameterize_by_T(Polyline{{0.1, 0.1}, {0.9, 0.7}}, sched);
  EXPECT_EQ(closeness(a, a), 0.0);
}
