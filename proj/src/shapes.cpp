#include "polarfk/shapes.hpp"

#include <algorithm>
#include <cmath>

#include "polarfk/errors.hpp"

namespace polarfk {

bool operator==(const Union& a, const Union& b) { return a.members == b.members; }
bool operator==(const Intersection& a, const Intersection& b) { return a.members == b.members; }

namespace {

constexpr double kSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Signed "inside" value: <= 0 means in the closed shape, < 0 in the open one.
bool test(double value, bool closed) { return closed ? value <= kSlack : value < -kSlack; }

Polygon rectangle_polygon(const Rectangle& r) {
  return Polygon{{r.lo, {r.hi.x, r.lo.y}, r.hi, {r.lo.x, r.hi.y}}};
}

Polygon rhombus_polygon(const Rhombus& r) {
  const double d = r.half_diagonal;
  const Vec2 c = r.center;
  return Polygon{{{c.x + d, c.y}, {c.x, c.y + d}, {c.x - d, c.y}, {c.x, c.y - d}}};
}

}  // namespace

void validate(const ShapeSpec& shape) {
  std::visit(
      Overloaded{
          [](const Disk& d) {
            if (!finite(d.center) || !(d.radius > 0.0) || !std::isfinite(d.radius))
              throw InvalidShape("disk radius must be positive");
          },
          [](const Rectangle& r) {
            if (!finite(r.lo) || !finite(r.hi) || !(r.lo.x < r.hi.x) || !(r.lo.y < r.hi.y))
              throw InvalidShape("rectangle corners must satisfy lo < hi");
          },
          [](const Rhombus& r) {
            if (!finite(r.center) || !(r.half_diagonal > 0.0) || !std::isfinite(r.half_diagonal))
              throw InvalidShape("rhombus half-diagonal must be positive");
          },
          [](const Ellipse& e) {
            if (!finite(e.center) || !finite(e.semi_axes) || !(e.semi_axes.x > 0.0) ||
                !(e.semi_axes.y > 0.0) || !std::isfinite(e.angle))
              throw InvalidShape("ellipse semi-axes must be positive");
          },
          [](const Polygon& p) {
            const auto& v = p.vertices;
            if (v.size() < 3) throw InvalidShape("polygon needs at least 3 vertices");
            for (std::size_t k = 0; k < v.size(); ++k) {
              if (!finite(v[k])) throw InvalidShape("polygon vertex is not finite");
              const Vec2 e0 = v[(k + 1) % v.size()] - v[k];
              const Vec2 e1 = v[(k + 2) % v.size()] - v[(k + 1) % v.size()];
              if (!(cross(e0, e1) > 0.0))
                throw InvalidShape("polygon must be convex and counter-clockwise");
            }
          },
          [](const HalfPlane& h) {
            if (!finite(h.normal) || !std::isfinite(h.offset) || !(norm(h.normal) > 0.0))
              throw InvalidShape("half-plane normal must be nonzero");
          },
          [](const Union& u) {
            if (u.members.empty()) throw InvalidShape("union must have members");
            for (const auto& m : u.members) validate(m);
          },
          [](const Intersection& u) {
            if (u.members.empty()) throw InvalidShape("intersection must have members");
            for (const auto& m : u.members) validate(m);
          },
      },
      shape.kind);
}

bool contains(const ShapeSpec& shape, Vec2 x, bool closed) {
  return std::visit(
      Overloaded{
          [&](const Disk& d) {
            const Vec2 r = x - d.center;
            return test(dot(r, r) - d.radius * d.radius, closed);
          },
          [&](const Rectangle& r) {
            const double v = std::max(std::max(r.lo.x - x.x, x.x - r.hi.x),
                                      std::max(r.lo.y - x.y, x.y - r.hi.y));
            return test(v, closed);
          },
          [&](const Rhombus& r) {
            return test(std::abs(x.x - r.center.x) + std::abs(x.y - r.center.y) - r.half_diagonal,
                        closed);
          },
          [&](const Ellipse& e) {
            const Vec2 q = rotate(x - e.center, -e.angle);
            const double u = q.x / e.semi_axes.x, v = q.y / e.semi_axes.y;
            return test(u * u + v * v - 1.0, closed);
          },
          [&](const Polygon& p) {
            const auto& v = p.vertices;
            double worst = -1e300;
            for (std::size_t k = 0; k < v.size(); ++k) {
              const Vec2 e = v[(k + 1) % v.size()] - v[k];
              worst = std::max(worst, -cross(e, x - v[k]) / norm(e));
            }
            return test(worst, closed);
          },
          [&](const HalfPlane& h) {
            return test((dot(x, h.normal) - h.offset) / norm(h.normal), closed);
          },
          [&](const Union& u) {
            return std::any_of(u.members.begin(), u.members.end(),
                               [&](const ShapeSpec& m) { return contains(m, x, closed); });
          },
          [&](const Intersection& u) {
            return std::all_of(u.members.begin(), u.members.end(),
                               [&](const ShapeSpec& m) { return contains(m, x, closed); });
          },
      },
      shape.kind);
}

std::optional<Box> bounding_box(const ShapeSpec& shape) {
  return std::visit(
      Overloaded{
          [](const Disk& d) -> std::optional<Box> {
            return Box{{d.center.x - d.radius, d.center.y - d.radius},
                       {d.center.x + d.radius, d.center.y + d.radius}};
          },
          [](const Rectangle& r) -> std::optional<Box> { return Box{r.lo, r.hi}; },
          [](const Rhombus& r) -> std::optional<Box> {
            const double d = r.half_diagonal;
            return Box{{r.center.x - d, r.center.y - d}, {r.center.x + d, r.center.y + d}};
          },
          [](const Ellipse& e) -> std::optional<Box> {
            const double c = std::cos(e.angle), s = std::sin(e.angle);
            const double hx = std::hypot(e.semi_axes.x * c, e.semi_axes.y * s);
            const double hy = std::hypot(e.semi_axes.x * s, e.semi_axes.y * c);
            return Box{{e.center.x - hx, e.center.y - hy}, {e.center.x + hx, e.center.y + hy}};
          },
          [](const Polygon& p) -> std::optional<Box> {
            Box b{p.vertices.front(), p.vertices.front()};
            for (const Vec2 v : p.vertices) {
              b.lo = {std::min(b.lo.x, v.x), std::min(b.lo.y, v.y)};
              b.hi = {std::max(b.hi.x, v.x), std::max(b.hi.y, v.y)};
            }
            return b;
          },
          [](const HalfPlane&) -> std::optional<Box> { return std::nullopt; },
          [](const Union& u) -> std::optional<Box> {
            std::optional<Box> out;
            for (const auto& m : u.members) {
              const auto b = bounding_box(m);
              if (!b) return std::nullopt;
              if (!out) {
                out = b;
              } else {
                out->lo = {std::min(out->lo.x, b->lo.x), std::min(out->lo.y, b->lo.y)};
                out->hi = {std::max(out->hi.x, b->hi.x), std::max(out->hi.y, b->hi.y)};
              }
            }
            return out;
          },
          [](const Intersection& u) -> std::optional<Box> {
            std::optional<Box> out;
            for (const auto& m : u.members) {
              const auto b = bounding_box(m);
              if (!b) continue;
              if (!out) {
                out = b;
              } else {
                out->lo = {std::max(out->lo.x, b->lo.x), std::max(out->lo.y, b->lo.y)};
                out->hi = {std::min(out->hi.x, b->hi.x), std::min(out->hi.y, b->hi.y)};
              }
            }
            return out;
          },
      },
      shape.kind);
}

RasterSet rasterize(const ShapeSpec& shape, const Grid& grid, bool closed) {
  validate(shape);
  const auto box = bounding_box(shape);
  if (!box) throw OutOfBounds("shape is unbounded");
  const Vec2 lo = grid.origin(), hi = grid.upper_corner();
  const double tol = 1e-9 * grid.spacing();
  if (box->lo.x < lo.x - tol || box->lo.y < lo.y - tol || box->hi.x > hi.x + tol ||
      box->hi.y > hi.y + tol)
    throw OutOfBounds("shape extends beyond the grid");
  RasterSet out(grid);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i)
      if (contains(shape, grid.cell_center(i, j), closed)) out.set(i, j, true);
  return out;
}

ShapeSpec translated_obstacle(const ShapeSpec& shape, Vec2 h, double s) {
  const Vec2 t = s * h;
  return std::visit(
      Overloaded{
          [&](Disk d) -> ShapeSpec {
            d.center = d.center + t;
            return d;
          },
          [&](Rectangle r) -> ShapeSpec {
            r.lo = r.lo + t;
            r.hi = r.hi + t;
            return r;
          },
          [&](Rhombus r) -> ShapeSpec {
            r.center = r.center + t;
            return r;
          },
          [&](Ellipse e) -> ShapeSpec {
            e.center = e.center + t;
            return e;
          },
          [&](Polygon p) -> ShapeSpec {
            for (auto& v : p.vertices) v = v + t;
            return p;
          },
          [&](HalfPlane hp) -> ShapeSpec {
            hp.offset += dot(t, hp.normal);
            return hp;
          },
          [&](Union u) -> ShapeSpec {
            for (auto& m : u.members) m = translated_obstacle(m, h, s);
            return u;
          },
          [&](Intersection u) -> ShapeSpec {
            for (auto& m : u.members) m = translated_obstacle(m, h, s);
            return u;
          },
      },
      shape.kind);
}

ShapeSpec rotated_by_angle(const ShapeSpec& shape, Vec2 a, double angle) {
  if (angle == 0.0) return shape;
  const auto about = [&](Vec2 x) { return a + rotate(x - a, angle); };
  return std::visit(
      Overloaded{
          [&](Disk d) -> ShapeSpec {
            d.center = about(d.center);
            return d;
          },
          [&](const Rectangle& r) -> ShapeSpec {
            Polygon p = rectangle_polygon(r);
            for (auto& v : p.vertices) v = about(v);
            return p;
          },
          [&](const Rhombus& r) -> ShapeSpec {
            Polygon p = rhombus_polygon(r);
            for (auto& v : p.vertices) v = about(v);
            return p;
          },
          [&](Ellipse e) -> ShapeSpec {
            e.center = about(e.center);
            e.angle += angle;
            return e;
          },
          [&](Polygon p) -> ShapeSpec {
            for (auto& v : p.vertices) v = about(v);
            return p;
          },
          [&](HalfPlane hp) -> ShapeSpec {
            const Vec2 n = rotate(hp.normal, angle);
            hp.offset = hp.offset - dot(a, hp.normal) + dot(a, n);
            hp.normal = n;
            return hp;
          },
          [&](Union u) -> ShapeSpec {
            for (auto& m : u.members) m = rotated_by_angle(m, a, angle);
            return u;
          },
          [&](Intersection u) -> ShapeSpec {
            for (auto& m : u.members) m = rotated_by_angle(m, a, angle);
            return u;
          },
      },
      shape.kind);
}

// In the plane the rotation is fixed by its angle; eta only names the
// reference ray and does not change the result.
ShapeSpec rotated_obstacle(const ShapeSpec& shape, Vec2 a, [[maybe_unused]] Vec2 eta, double s) {
  if (!(s >= -1.0 && s <= 1.0)) throw InvalidShape("rotation parameter must lie in [-1, 1]");
  return rotated_by_angle(shape, a, std::acos(s));
}

}  // namespace polarfk
