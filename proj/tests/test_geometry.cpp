#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "polarfk/domain.hpp"
#include "polarfk/errors.hpp"
#include "polarfk/shapes.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "support/set_laws.hpp"

using namespace polarfk;

namespace {

constexpr double kD = 1.0 / 32;

RasterSet raster(const ShapeSpec& s, const Grid& g) { return rasterize(s, g, true); }

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + "; ";
  return out;
}

}  // namespace

TEST_CASE("reflect_point") {
  const Polarizer h({1, 0}, 0);
  CHECK(reflect_point(h, {1, 2}) == Vec2{-1, 2});
  CHECK(reflect_point(h, {0, 5}) == Vec2{0, 5});

  const Polarizer d = Polarizer::from_direction({1, 1}, 0);
  const Vec2 m = reflect_point(d, {1, 0});
  CHECK(m.x == doctest::Approx(0).epsilon(1e-15));
  CHECK(m.y == doctest::Approx(-1));

  gen::Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Polarizer h2 = Polarizer::from_direction({rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-2, 2));
    const Vec2 x{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(norm(reflect_point(h2, reflect_point(h2, x)) - x) < 1e-12);
  }
}

TEST_CASE("polarizer construction and grid compatibility") {
  CHECK_THROWS_AS(Polarizer({1, 1}, 0), DegeneratePolarizer);
  CHECK_THROWS_AS(Polarizer::from_direction({0, 0}, 0), DegeneratePolarizer);
  const Grid g({0, 0}, 1.0, 8, 8);
  CHECK(Polarizer({1, 0}, 4).grid_compatible(g));
  CHECK(Polarizer({1, 0}, 4.5).grid_compatible(g));
  CHECK_FALSE(Polarizer({1, 0}, 4.25).grid_compatible(g));
  CHECK(Polarizer::through({3, 2}, {1, -1}).grid_compatible(g));
  CHECK_FALSE(Polarizer::through({3.5, 2}, {1, 1}).grid_compatible(g));
  CHECK_FALSE(Polarizer::from_direction({2, 1}, 0).grid_compatible(g));
  CHECK_THROWS_AS(polarize_set(Polarizer({1, 0}, 4.25), RasterSet(g)), IncompatiblePolarizer);
}

TEST_CASE("polarize_set examples") {
  const Grid g({0, 0}, 1.0, 8, 8);
  const Polarizer h({1, 0}, 4);
  RasterSet left(g);
  left.set(1, 1, true);
  left.set(2, 5, true);
  CHECK(polarize_set(h, left) == left);

  RasterSet sym(g);
  sym.set(2, 3, true);
  sym.set(5, 3, true);
  CHECK(polarize_set(h, sym) == sym);
  CHECK(dual_polarize_set(h, sym) == sym);

  gen::Rng rng(8);
  const RasterSet a = gen::random_raster(rng, RasterSet(g).complement(), 0.5);
  CHECK(polarize_set(h, a) == oracle::polarize(h, a, false));
  CHECK(dual_polarize_set(h, a) == oracle::polarize(h, a, true));
  CHECK(reflect_set(h, polarize_set(h, a)) == dual_polarize_set(h, a));
  const RasterSet all = RasterSet(g).complement();
  CHECK(polarize_set(h, all - a) == all - dual_polarize_set(h, a));
}

TEST_CASE("mass leaving the grid") {
  const Grid g({0, 0}, 1.0, 8, 8);
  const Polarizer h({1, 0}, 2);  // mirrors of x > 4 leave the grid
  RasterSet a(g);
  a.set(7, 1, true);
  CHECK_THROWS_AS(polarize_set(h, a), OutOfBounds);
  CHECK_THROWS_AS(reflect_set(h, a), OutOfBounds);
  CHECK_FALSE(is_polarization_invariant(h, a));
}

TEST_CASE("set laws on random rasters") {
  gen::Rng rng(1);
  for (int t = 0; t < 120; ++t) {
    const Grid g = gen::square_grid(rng.integer(8, 24));
    const Polarizer h = gen::random_polarizer(rng, g);
    const RasterSet u = gen::mirror_closed(h, g);
    const double density = rng.uniform(0.1, 0.9);
    RasterSet a = gen::random_raster(rng, u, density);
    if (t % 3 == 1) a = polarize_set(h, a);
    if (t % 3 == 2) a = a | reflect_set(h, a);
    const RasterSet c = gen::random_raster(rng, u, density) | a;
    const auto bad = laws::check_set_laws(h, a, c, u);
    INFO("trial " << t << ": " << join(bad));
    CHECK(bad.empty());
  }
}

TEST_CASE("witness_sets") {
  const Grid g = grid_around({0, 0}, 1.2, kD);
  const Polarizer h({1, 0}, 0.25);
  SUBCASE("domain inside H") {
    const RasterSet om = raster(Disk{{-0.2, 0}, 0.3}, g);
    const auto w = witness_sets(h, om);
    CHECK(w.a_h.empty());
    CHECK(w.b_h == (om & oracle::polarize(h, om, false)));
  }
  SUBCASE("symmetric domain") {
    const RasterSet om = raster(Disk{{0.25, 0.1}, 0.4}, g);
    const auto w = witness_sets(h, om);
    CHECK(w.a_h.empty());
    CHECK(w.b_h.empty());
  }
  SUBCASE("oblique ellipse crossing the boundary") {
    const RasterSet om = raster(Ellipse{{0.3, 0.1}, {0.7, 0.3}, 0.6}, g);
    const auto w = witness_sets(h, om);
    CHECK_FALSE(w.a_h.empty());
    CHECK_FALSE(w.b_h.empty());
    const RasterSet p = polarize_set(h, om);
    CHECK_FALSE(p == om);
    CHECK_FALSE(p == reflect_set(h, om));
  }
}

TEST_CASE("polarize_punctured") {
  const Grid g = grid_around({0, 0}, 1.1, kD);
  const RasterSet outer = rasterize(Disk{{0, 0}, 1.0}, g, false);
  SUBCASE("symmetric domain is unchanged") {
    const PuncturedDomain d(outer, {Obstacle{raster(Disk{{0, 0}, 0.3}, g), {}}}, Boundary::Dirichlet,
                            Boundary::Dirichlet);
    const PuncturedDomain p = polarize_punctured(Polarizer({0, 1}, 0), d);
    CHECK(p.outer() == d.outer());
    CHECK(p.obstacle_union() == d.obstacle_union());
  }
  SUBCASE("obstacle moves to the far side") {
    const PuncturedDomain d(outer, {Obstacle{raster(Disk{{0, 0}, 0.3}, g), Boundary::Neumann}},
                            Boundary::Dirichlet, Boundary::Dirichlet);
    const double s = 4 * kD;
    const Polarizer h({1, 0}, s);
    REQUIRE(is_admissible(h, d));
    const PuncturedDomain p = polarize_punctured(h, d);
    CHECK(p.obstacle_union() == raster(Disk{{0, 0}, 0.3}, g).shifted(8, 0));
    REQUIRE(p.obstacles().size() == 1);
    CHECK(p.obstacle_bc(0) == Boundary::Neumann);
    CHECK(p.free_cells() == oracle::polarize(h, outer, false) - oracle::polarize(h, d.obstacle_union(), true));
    CHECK(p.free_cells().count() == d.free_cells().count());
  }
  SUBCASE("too far out is not admissible") {
    const PuncturedDomain d(outer, {Obstacle{raster(Disk{{0, 0}, 0.3}, g), {}}}, Boundary::Dirichlet,
                            Boundary::Dirichlet);
    const Polarizer h({1, 0}, 0.375);
    CHECK_FALSE(is_admissible(h, d));
    CHECK_THROWS_AS(polarize_punctured(h, d), NotAdmissible);
  }
  SUBCASE("random domains satisfy the punctured identity") {
    gen::Rng rng(5);
    int checked = 0;
    for (int t = 0; t < 400; ++t) {
      const auto draw = gen::random_domain_shapes(rng, 1.0 / 16);
      std::vector<Obstacle> obs;
      for (const auto& o : draw.obstacles) obs.push_back({raster(o, draw.grid), {}});
      try {
        const PuncturedDomain d(rasterize(draw.outer, draw.grid, false), obs, Boundary::Dirichlet,
                                Boundary::Dirichlet);
        const Polarizer h = gen::random_polarizer(rng, draw.grid);
        if (!is_admissible(h, d) || !d.outer().subset_of(gen::mirror_closed(h, draw.grid))) continue;
        CHECK(laws::punctured_identity(h, d));
        ++checked;
      } catch (const MalformedDomain&) {
      } catch (const OutOfBounds&) {
      }
    }
    CHECK(checked >= 40);
  }
}

TEST_CASE("steiner symmetry") {
  const Grid g = grid_around({0, 0}, 1.0, kD);
  CHECK(is_steiner_symmetric(raster(Disk{{0, 0.2}, 0.4}, g), SymmetryAxis::X, 0).symmetric);
  CHECK(is_steiner_symmetric(raster(Rhombus{{0, 0}, 0.5}, g), SymmetryAxis::X, 0).symmetric);
  CHECK(is_steiner_symmetric(raster(Rhombus{{0, 0}, 0.5}, g), SymmetryAxis::Diag, 0).symmetric);
  CHECK(steiner_sections_centered(raster(Rhombus{{0, 0}, 0.5}, g), SymmetryAxis::Diag, 0));

  const RasterSet l = raster(Union{{Rectangle{{-0.5, -0.5}, {0.5, -0.2}}, Rectangle{{-0.5, -0.5}, {-0.2, 0.5}}}}, g);
  const auto rep = is_steiner_symmetric(l, SymmetryAxis::X, 0);
  CHECK_FALSE(rep.symmetric);
  REQUIRE(rep.violating_offset.has_value());
  CHECK_FALSE(steiner_sections_centered(l, SymmetryAxis::X, 0));

  gen::Rng rng(21);
  for (int t = 0; t < 60; ++t) {
    const Grid sg = gen::square_grid(16);
    const RasterSet a = gen::random_blob(rng, RasterSet(sg).complement(), rng.integer(5, 60));
    const RasterSet s = a | reflect_set(Polarizer({1, 0}, 8), a);
    for (const RasterSet& x : {a, s})
      CHECK(is_steiner_symmetric(x, SymmetryAxis::X, 8).symmetric == steiner_sections_centered(x, SymmetryAxis::X, 8));
  }
}

TEST_CASE("foliated Schwarz symmetry") {
  const Vec2 a{-0.25, 0};
  const Grid g = grid_around(a, 1.0, kD);
  const Vec2 eta{1, 0};
  const auto pool = default_pool(g, a, eta);
  REQUIRE(pool.size() == 3);
  CHECK(is_foliated_schwarz(raster(Disk{a + 0.4 * eta, 0.2}, g), a, eta, pool));

  const RasterSet radial = raster(Disk{a, 0.6}, g) - raster(Disk{a, 0.2}, g);
  CHECK(is_foliated_schwarz(radial, a, eta, pool));
  CHECK(is_foliated_schwarz(radial, a, -eta, default_pool(g, a, -eta)));
  CHECK(is_foliated_schwarz(radial, a, {0, 1}, default_pool(g, a, {0, 1})));

  RasterSet cap = raster(Intersection{{Disk{a, 0.7}, HalfPlane{{-1, 0}, 0.25}}}, g) - raster(Disk{a, 0.2}, g);
  CHECK(is_foliated_schwarz(cap, a, eta, pool));
  CHECK_FALSE(is_foliated_schwarz(raster(Disk{a - 0.4 * eta, 0.2}, g), a, eta, pool));
  const RasterSet dent = cap - raster(Disk{a + Vec2{0.3, 0.4}, 0.08}, g) | raster(Disk{a + Vec2{-0.3, 0.4}, 0.08}, g);
  CHECK_FALSE(is_foliated_schwarz(dent, a, eta, pool));

  CHECK_THROWS_AS(is_foliated_schwarz(radial, a, eta, {Polarizer({1, 0}, a.x)}), PoolViolation);
  CHECK_THROWS_AS(is_foliated_schwarz(radial, a, eta, {Polarizer({-1, 0}, 0.0)}), PoolViolation);
}

TEST_CASE("rotation_polarizer") {
  const Polarizer h = rotation_polarizer({0, 0}, {1, 0}, 1, 0);
  CHECK(std::abs(h.normal().x - M_SQRT1_2) < 1e-12);
  CHECK(std::abs(h.normal().y + M_SQRT1_2) < 1e-12);
  CHECK(norm(h.reflect({0, 1}) - Vec2{1, 0}) < 1e-12);

  const Vec2 a{0.3, -0.2}, eta{0, 1};
  for (auto [s, t] : {std::pair{std::cos(M_PI / 6), std::cos(M_PI / 2)}, std::pair{-0.4, 0.9}, std::pair{0.2, -1.0}}) {
    const Polarizer p = rotation_polarizer(a, eta, s, t);
    CHECK(std::abs(dot(a, p.normal()) - p.offset()) < 1e-12);
    for (double r : {1.0, 2.0, 5.0}) {
      const Vec2 from = a + r * rotate(eta, std::acos(t));
      const Vec2 to = a + r * rotate(eta, std::acos(s));
      CHECK(norm(p.reflect(from) - to) < 1e-12);
    }
  }
  CHECK_THROWS_AS(rotation_polarizer({0, 0}, {1, 0}, 0.5, 0.5), DegeneratePolarizer);
  CHECK_THROWS_AS(rotation_polarizer({0, 0}, {1, 0}, 1.5, 0.5), DegeneratePolarizer);
}

TEST_CASE("translated obstacles") {
  const Grid g = grid_around({0, 0}, 1.0, kD);
  const ShapeSpec o = Rhombus{{0, 0}, 0.25};
  CHECK(translated_obstacle(o, {1, 0}, 0) == o);
  for (int ks = -6; ks <= 6; ks += 3)
    for (int kt = -4; kt <= 4; kt += 2) {
      const double s = ks * kD, t = kt * kD;
      const RasterSet os = raster(translated_obstacle(o, {1, 0}, s), g);
      CHECK(reflect_set(Polarizer({1, 0}, t), os) == raster(translated_obstacle(o, {1, 0}, 2 * t - s), g));
      CHECK(os.shifted(kt, 0) == raster(translated_obstacle(o, {1, 0}, s + t), g));
    }
}

TEST_CASE("rotated obstacles") {
  const Vec2 a{0.1, 0.2}, eta{1, 0};
  const ShapeSpec d = Disk{a + 0.5 * eta, 0.1};
  CHECK(rotated_obstacle(d, a, eta, 1.0) == d);
  const ShapeSpec rd = rotated_obstacle(d, a, eta, 0.0);
  const auto* q = std::get_if<Disk>(&rd.kind);
  REQUIRE(q);
  CHECK(norm(q->center - (a + Vec2{0, 0.5})) < 1e-15);

  const ShapeSpec u = Union{{Disk{a + 0.3 * eta, 0.05}, Disk{a + 0.6 * eta, 0.08}}};
  const double s = std::cos(M_PI / 3);
  const ShapeSpec ru = rotated_obstacle(u, a, eta, s);
  const auto* r = std::get_if<Union>(&ru.kind);
  REQUIRE(r);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& before = std::get<Disk>(std::get<Union>(u.kind).members[k].kind);
    const auto& after = std::get<Disk>(r->members[k].kind);
    CHECK(norm(after.center - (a + rotate(before.center - a, M_PI / 3))) < 1e-14);
    CHECK(after.radius == before.radius);
  }
}

TEST_CASE("rasterize") {
  const Grid g({-1, -1}, 2.0 / 64, 64, 64);
  const RasterSet disk = raster(Disk{{0, 0}, 0.5}, g);
  const double cell = g.spacing() * g.spacing();
  const double expected = M_PI * 0.25 / cell;
  CHECK(std::abs(static_cast<double>(disk.count()) - expected) <= 2 * (2 * M_PI * 0.5) / g.spacing());

  const RasterSet rect = raster(Rectangle{{-0.5, -0.25}, {0.5, 0.25}}, g);
  CHECK(rect.count() == 32u * 16u);
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) CHECK(rect.contains(i, j) == (i >= 16 && i < 48 && j >= 24 && j < 40));

  const ShapeSpec d1 = Disk{{-0.5, 0}, 0.2}, d2 = Disk{{0.5, 0}, 0.3};
  CHECK(raster(Union{{d1, d2}}, g) == (raster(d1, g) | raster(d2, g)));
  CHECK_THROWS_AS(raster(Disk{{0.9, 0}, 0.3}, g), OutOfBounds);
  CHECK_THROWS_AS(raster(HalfPlane{{1, 0}, 0}, g), OutOfBounds);
  CHECK_THROWS_AS(validate(Disk{{0, 0}, -1}), InvalidShape);
  CHECK_THROWS_AS(validate(Union{}), InvalidShape);
}

TEST_CASE("connected components") {
  const Grid g = grid_around({0, 0}, 1.0, kD);
  CHECK(connected_components(raster(Disk{{0, 0}, 0.4}, g)).count == 1);
  CHECK(connected_components(raster(Union{{Disk{{-0.5, 0}, 0.2}, Disk{{0.5, 0}, 0.2}}}, g)).count == 2);

  // P_H(Omega) n H is connected; when dH runs through cell centres the tie
  // cells on dH are included.
  gen::Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const Grid sg = gen::square_grid(rng.integer(10, 24));
    const Polarizer h = gen::random_polarizer(rng, sg);
    const RasterSet u = gen::mirror_closed(h, sg);
    const RasterSet om = gen::random_blob(rng, u, rng.integer(10, 120));
    const RasterSet p = polarize_set(h, om);
    const GridReflection refl(h, sg);
    RasterSet side(sg);
    for (int c = 0; c < sg.cell_count(); ++c) side.set(c, refl.cell_side(c) != Side::Outside);
    const RasterSet part = p & side;
    if (part.empty()) continue;
    CHECK(connected_components(part).count == 1);
  }
}

TEST_CASE("pgm dump") {
  const Grid g({0, 0}, 1.0, 3, 2);
  RasterSet a(g);
  a.set(0, 0, true);
  a.set(2, 1, true);
  std::ostringstream ss;
  write_pgm(a, ss);
  CHECK(ss.str() == "P2\n3 2\n1\n0 0 1\n1 0 0\n");
}
