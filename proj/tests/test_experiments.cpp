#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polarfk/errors.hpp"
#include "polarfk/experiments.hpp"
#include "support/oracles.hpp"

using namespace polarfk;

namespace {

constexpr double kD = 1.0 / 16;

SolverConfig with_p(double p) {
  SolverConfig c;
  c.p = p;
  return c;
}

SweepResult synthetic(std::vector<double> lambdas, std::vector<bool> converged = {}) {
  SweepResult s;
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    s.points.push_back({static_cast<double>(k), lambdas[k], converged.empty() || converged[k], 1, 0.0});
  classify(s, SolverConfig{});
  return s;
}

PuncturedDomain disk_with_hole(const Grid& g, Vec2 hole, double r, std::optional<Boundary> bc = {}) {
  DomainSpec spec{Disk{{0, 0}, 1.0}, Boundary::Dirichlet, Boundary::Dirichlet, {{Disk{hole, r}, bc}}, false};
  return build_domain(spec, g);
}

std::vector<double> multiples(double step, int from, int to) {
  std::vector<double> s;
  for (int k = from; k <= to; ++k) s.push_back(k * step);
  return s;
}

}  // namespace

TEST_CASE("sweep classification") {
  CHECK(synthetic({1.0, 1.1, 1.3}).direction == Direction::Increasing);
  CHECK(synthetic({3.0, 2.0, 1.0}).direction == Direction::Decreasing);
  CHECK(synthetic({1.0, 1.0002, 0.9999}).direction == Direction::Constant);
  CHECK(synthetic({1.0, 1.5, 1.2}).direction == Direction::Mixed);
  const SweepResult skip = synthetic({1.0, 5.0, 1.1, 1.2}, {true, false, true, true});
  CHECK(skip.direction == Direction::Increasing);
  CHECK(skip.min_margin > 0.08);
  CHECK(skip.min_margin < 0.1);
  CHECK_FALSE(skip.all_converged());
  CHECK(skip.notes.size() == 1);
  CHECK(synthetic({1.0}).notes.size() == 1);
  CHECK(strict_threshold(SolverConfig{}) == 1e-4);
  SolverConfig loose;
  loose.outer_tol = 1e-3;
  CHECK(strict_threshold(loose) == doctest::Approx(3e-3));
}

TEST_CASE("fk_check") {
  const Grid g = grid_around({0, 0}, 1.1, kD);
  SUBCASE("invariant domain") {
    const FkVerdict v = fk_check(disk_with_hole(g, {0.25, 0}, 0.2), Polarizer({1, 0}, 0), with_p(2));
    CHECK(v.strict_case == StrictCase::Invariant);
    CHECK(v.relation == Relation::Leq);
    CHECK(v.lambda_before == v.lambda_after);
    CHECK(v.converged);
  }
  SUBCASE("reflected domain") {
    const FkVerdict v = fk_check(disk_with_hole(g, {-0.25, 0}, 0.2), Polarizer({1, 0}, 0), with_p(2));
    CHECK(v.strict_case == StrictCase::Reflected);
    CHECK(std::abs(v.gap) <= 1e-9 * v.lambda_before);
  }
  SUBCASE("strict decrease") {
    for (double p : {2.0, 3.0}) {
      DomainSpec spec{Disk{{0, 0}, 1.0}, Boundary::Dirichlet, Boundary::Dirichlet,
                      {{Disk{{0.3, 0.3}, 0.2}, {}}, {Disk{{-0.3, -0.3}, 0.2}, {}}}, false};
      const PuncturedDomain d = build_domain(spec, g);
      const Polarizer h({1, 0}, 0);
      const FkVerdict v = fk_check(d, h, with_p(p));
      CHECK(v.strict_case == StrictCase::Strict);
      CHECK(v.relation == Relation::Leq);
      CHECK(v.gap > v.tolerance);
      CHECK(v.tolerance == doctest::Approx(1e-3 * v.lambda_before));
      CHECK(v.before.param == 0.0);
      CHECK(v.after.param == 1.0);
    }
  }
  SUBCASE("mirrored configuration gives the same polarized eigenvalue") {
    const PuncturedDomain d = disk_with_hole(g, {-0.125, 0.25}, 0.2);
    const Polarizer h({1, 0}, 0);
    const FkVerdict a = fk_check(d, h, with_p(2));
    const FkVerdict b = fk_check(reflect_domain(h, d), h, with_p(2));
    CHECK(std::abs(a.lambda_after - b.lambda_after) <= 1e-9 * a.lambda_after);
    CHECK(std::abs(a.lambda_before - b.lambda_before) <= 1e-9 * a.lambda_before);
  }
  SUBCASE("hypotheses") {
    CHECK_THROWS_AS(fk_check(disk_with_hole(g, {0.25, 0}, 0.2, Boundary::Neumann), Polarizer({1, 0}, 0), with_p(2)),
                    SymmetryHypothesisViolated);
    CHECK_THROWS_AS(fk_check(disk_with_hole(g, {0, 0}, 0.2), Polarizer({1, 0}, 0.5), with_p(2)), NotAdmissible);
    std::optional<GridFunction> u;
    fk_check(disk_with_hole(g, {0, 0.25}, 0.2, Boundary::Neumann), Polarizer({1, 0}, 0), with_p(2), &u);
    CHECK(u.has_value());
  }
}

TEST_CASE("translate sweep on a disk") {
  TranslateScenario sc{grid_around({0, 0}, 1.1, kD), Disk{{0, 0}, 1.0}, Disk{{0, 0}, 0.3}, {1, 0},
                       multiples(2 * kD, 0, 4)};
  const SweepResult r = translate_sweep(sc, with_p(2));
  REQUIRE(r.points.size() == 5);
  CHECK(r.direction == Direction::Decreasing);

  sc.direction = {-1, 0};
  const SweepResult back = translate_sweep(sc, with_p(2));
  REQUIRE(back.points.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) CHECK(back.points[k].lambda == doctest::Approx(r.points[k].lambda).epsilon(1e-9));

  sc.s_values = {2 * kD, 2 * kD, 2 * kD};
  CHECK(translate_sweep(sc, with_p(2)).direction == Direction::Constant);

  sc.s_values = {0.5 * kD};
  CHECK_THROWS_AS(translate_sweep(sc, with_p(2)), InvalidConfig);
  sc.s_values = {kD, 0.0};
  CHECK_THROWS_AS(translate_sweep(sc, with_p(2)), InvalidConfig);
  sc.direction = {2, 1};
  sc.s_values = {0.0};
  CHECK_THROWS_AS(translate_sweep(sc, with_p(2)), InvalidConfig);
}

TEST_CASE("translate sweep hypotheses") {
  TranslateScenario sc{grid_around({0, 0}, 1.1, kD), Disk{{0.3, 0}, 0.7}, Disk{{0, 0}, 0.2}, {1, 0}, {0.0, 2 * kD}};
  CHECK_THROWS_AS(translate_sweep(sc, with_p(2)), AssumptionViolated);
  sc.domain = Disk{{0, 0}, 1.0};
  sc.obstacle = Disk{{0.1, 0}, 0.2};
  CHECK_THROWS_AS(translate_sweep(sc, with_p(2)), AssumptionViolated);

  sc.obstacle = Disk{{0, 0}, 0.3};
  sc.s_values = {0.0, 0.75};
  const SweepResult r = translate_sweep(sc, with_p(2));
  CHECK(r.points.size() == 1);
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("translate sweep on a half disk joined to a rhombus") {
  const double R = 1.0, l = 0.15;
  const ShapeSpec domain = Union{{Intersection{{Disk{{0, 0}, R}, HalfPlane{{1, 0}, 0}}},
                                  Intersection{{Rhombus{{0, 0}, R}, HalfPlane{{-1, 0}, 0}}}}};
  TranslateScenario sc{grid_around({0, 0}, 1.1, kD), domain, Rhombus{{0, 0}, l}, {1, 0}, multiples(kD, 0, 4)};
  for (double p : {2.0, 3.0}) {
    const SweepResult r = translate_sweep(sc, with_p(p));
    CHECK(r.points.size() == 5);
    CHECK(r.direction == Direction::Decreasing);
  }
}

TEST_CASE("translate sweep along the diagonal") {
  TranslateScenario sc{grid_around({0, 0}, 1.1, kD), Disk{{0, 0}, 1.0}, Rhombus{{0, 0}, 0.25},
                       Vec2{M_SQRT1_2, M_SQRT1_2}, multiples(std::sqrt(2.0) * kD, 0, 3)};
  const SweepResult r = translate_sweep(sc, with_p(2));
  REQUIRE(r.points.size() == 4);
  CHECK(r.direction == Direction::Decreasing);
}

TEST_CASE("rotate sweep") {
  const std::vector<double> s{-0.5, 0.0, 0.5, std::cos(M_PI / 6), 1.0};
  SUBCASE("radial domain gives a constant sweep") {
    // quarter turns keep the raster exact
    RotateScenario sc{grid_around({0, 0}, 1.1, kD), DomainSpec{Disk{{0, 0}, 1.0}}, Disk{{0.5, 0}, 0.15},
                      Boundary::Dirichlet, {0, 0}, {1, 0}, {-1.0, 0.0, 1.0}};
    const RotateReport r = rotate_sweep(sc, with_p(2));
    CHECK(r.radial);
    CHECK(r.expected == Direction::Constant);
    REQUIRE(r.sweep.points.size() == 3);
    CHECK(r.sweep.direction == Direction::Constant);
    CHECK(r.sweep.points[0].lambda == doctest::Approx(r.sweep.points[2].lambda).epsilon(1e-9));
  }
  SUBCASE("Neumann hole off the ray") {
    const Vec2 a{-0.25, 0};
    DomainSpec fixed{Disk{{0, 0}, 1.0}, Boundary::Dirichlet, Boundary::Dirichlet,
                     {{Disk{a, 0.25}, Boundary::Neumann}}, false};
    RotateScenario sc{grid_around(a, 1.25, kD), fixed, Disk{{0.3, 0}, 0.15}, Boundary::Dirichlet, a, {1, 0}, s};
    const RotateReport ccw = rotate_sweep(sc, with_p(2));
    CHECK_FALSE(ccw.radial);
    CHECK(ccw.expected == Direction::Increasing);
    CHECK(ccw.sweep.direction == Direction::Increasing);
    sc.clockwise = true;
    const RotateReport cw = rotate_sweep(sc, with_p(2));
    REQUIRE(cw.sweep.points.size() == ccw.sweep.points.size());
    for (std::size_t k = 0; k < cw.sweep.points.size(); ++k)
      CHECK(std::abs(cw.sweep.points[k].lambda - ccw.sweep.points[k].lambda) <= 1e-9 * ccw.sweep.points[k].lambda);

    sc.bc_obstacle = Boundary::Neumann;
    CHECK_THROWS_AS(rotate_sweep(sc, with_p(2)), AssumptionViolated);
    sc.bc_obstacle = Boundary::Dirichlet;
    sc.domain.obstacles[0].shape = Disk{{-0.3, 0}, 0.25};
    CHECK_THROWS_AS(rotate_sweep(sc, with_p(2)), AssumptionViolated);
    sc.domain.obstacles[0].shape = Disk{a, 0.25};
    sc.eta = {-1, 0};
    CHECK_THROWS_AS(rotate_sweep(sc, with_p(2)), AssumptionViolated);
    sc.eta = {1, 0};
    sc.s_values = {0.5, 0.2};
    CHECK_THROWS_AS(rotate_sweep(sc, with_p(2)), InvalidConfig);
  }
}

TEST_CASE("annulus study on a coarse grid") {
  const AnnulusParams prm;
  const Grid g = grid_around({0, 0}, 1.1, kD);
  const AnnulusReport r = annulus_study(prm, g, with_p(2));
  CHECK(r.r_bar == doctest::Approx(0.475));
  CHECK(r.line.points.size() >= 5);
  for (const auto& pt : r.line.points) {
    const double k = pt.param / (2 * kD);
    CHECK(std::abs(k - std::round(k)) < 1e-12);
  }
  REQUIRE(r.circles.size() == 2);
  CHECK(r.circles[0].t == 0.0);
  CHECK(r.circles[1].t == -prm.alpha);
  CHECK(r.circles[0].beta == doctest::Approx(0.725));
  CHECK(r.circles[1].beta == doctest::Approx(0.475));

  // one line point against a direct solve
  const auto& pt = r.line.points[1];
  DomainSpec spec{Disk{{0, 0}, prm.R}, Boundary::Dirichlet, Boundary::Dirichlet,
                  {{Disk{{-prm.alpha, 0}, prm.r}, {}}, {Disk{{pt.param, 0}, prm.rho}, {}}}, false};
  const EigenResult direct = solve(triangulate(build_domain(spec, g)), with_p(2));
  CHECK(direct.lambda == doctest::Approx(pt.lambda).epsilon(1e-12));

  double best = 0.0;
  for (const auto& p : r.line.points) best = std::max(best, p.lambda);
  CHECK(r.argmax_lambda == best);

  CHECK_THROWS_AS(annulus_study(prm, Grid({-1.1, -1.1}, 0.3, 8, 8), with_p(2)), InvalidConfig);
  AnnulusParams fat = prm;
  fat.alpha = 0.0;
  fat.r = 0.5;
  fat.rho = 0.5;
  CHECK_THROWS_AS(annulus_study(fat, g, with_p(2)), EmptyAdmissibleSet);
  AnnulusParams bad = prm;
  bad.alpha = 0.9;
  CHECK_THROWS_AS(annulus_study(bad, g, with_p(2)), InvalidConfig);
}

TEST_CASE("symmetry check") {
  SUBCASE("disk eigenfunction is radial and close to the Bessel profile") {
    const Grid g = grid_around({0, 0}, 1.1, 1.0 / 32);
    const PuncturedDomain d = build_domain(DomainSpec{Disk{{0, 0}, 1.0}}, g);
    std::optional<GridFunction> u;
    const SymmetryReport r = symmetry_check(d, {0, 0}, {1, 0}, with_p(2), 8, &u);
    CHECK(r.converged);
    CHECK(r.pool.size() == 3);
    CHECK(r.max_defect <= 1e-6);
    REQUIRE(u.has_value());
    const int i0 = static_cast<int>(std::lround(-g.origin().x / g.spacing()));
    const int j0 = static_cast<int>(std::lround(-g.origin().y / g.spacing()));
    const double u0 = u->at(i0, j0);
    for (int k = 0; k <= 28; k += 4) {
      const double x = k * g.spacing();
      CHECK(std::abs(u->at(i0 + k, j0) / u0 - std::cyl_bessel_j(0.0, oracle::kBesselJ0Zero * x)) <= 0.02);
    }
  }
  SUBCASE("eccentric annulus") {
    const Vec2 a{-0.125, 0};
    const Grid g = grid_around(a, 1.25, kD);
    DomainSpec spec{Disk{{0, 0}, 1.0}, Boundary::Dirichlet, Boundary::Dirichlet, {{Disk{{-0.25, 0}, 0.2}, {}}}, false};
    const PuncturedDomain d = build_domain(spec, g);
    std::optional<GridFunction> u;
    const SymmetryReport r = symmetry_check(d, a, {1, 0}, with_p(3), 8, &u);
    CHECK(r.converged);
    CHECK(r.max_defect <= 1e-9);
    REQUIRE(u.has_value());
    // the eigenfunction is not symmetric about the opposite ray
    double worst = 0.0;
    for (const Polarizer& h : default_pool(g, a, {-1, 0})) {
      const GridFunction pu = polarize_function(h, *u);
      worst = std::max(worst, oracle::sup_diff(pu.values(), u->values()) / oracle::sup_norm(u->values()));
    }
    CHECK(worst > 0.05);
    CHECK_THROWS_AS(symmetry_check(d, a, {-1, 0}, with_p(3)), AssumptionViolated);
  }
}
