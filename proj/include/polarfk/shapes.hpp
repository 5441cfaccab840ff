#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "polarfk/geometry.hpp"

namespace polarfk {

struct Disk {
  Vec2 center;
  double radius = 0.0;
  friend bool operator==(const Disk&, const Disk&) = default;
};

// Axis-aligned box [lo.x, hi.x] x [lo.y, hi.y].
struct Rectangle {
  Vec2 lo;
  Vec2 hi;
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

// {x : |x - center|_1 <= half_diagonal}.
struct Rhombus {
  Vec2 center;
  double half_diagonal = 0.0;
  friend bool operator==(const Rhombus&, const Rhombus&) = default;
};

// Semi-axes along the frame rotated counter-clockwise by `angle`.
struct Ellipse {
  Vec2 center;
  Vec2 semi_axes;
  double angle = 0.0;
  friend bool operator==(const Ellipse&, const Ellipse&) = default;
};

// Convex polygon, vertices counter-clockwise.
struct Polygon {
  std::vector<Vec2> vertices;
  friend bool operator==(const Polygon&, const Polygon&) = default;
};

// {x : x.normal <= offset}; unbounded, only useful inside an intersection.
struct HalfPlane {
  Vec2 normal;
  double offset = 0.0;
  friend bool operator==(const HalfPlane&, const HalfPlane&) = default;
};

struct ShapeSpec;

struct Union {
  std::vector<ShapeSpec> members;
  friend bool operator==(const Union&, const Union&);
};

struct Intersection {
  std::vector<ShapeSpec> members;
  friend bool operator==(const Intersection&, const Intersection&);
};

struct ShapeSpec {
  using Kind = std::variant<Disk, Rectangle, Rhombus, Ellipse, Polygon, HalfPlane, Union, Intersection>;
  Kind kind;

  ShapeSpec() : kind(Disk{}) {}
  template <class T>
  ShapeSpec(T shape) : kind(std::move(shape)) {}

  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

struct Box {
  Vec2 lo;
  Vec2 hi;
};

// Throws InvalidShape on nonpositive radii/axes, degenerate polygons or
// empty unions.
void validate(const ShapeSpec& shape);

bool contains(const ShapeSpec& shape, Vec2 x, bool closed = true);
std::optional<Box> bounding_box(const ShapeSpec& shape);

/// Cell-center sampling. Closed shapes use <=, open ones <. Throws
/// OutOfBounds when the shape is unbounded or pokes out of the grid box.
RasterSet rasterize(const ShapeSpec& shape, const Grid& grid, bool closed = true);

/// s*h + O.
ShapeSpec translated_obstacle(const ShapeSpec& shape, Vec2 h, double s);

/// a + R(-a + O) with R the counter-clockwise rotation by arccos(s).
ShapeSpec rotated_obstacle(const ShapeSpec& shape, Vec2 a, Vec2 eta, double s);

ShapeSpec rotated_by_angle(const ShapeSpec& shape, Vec2 a, double angle);

}  // namespace polarfk
