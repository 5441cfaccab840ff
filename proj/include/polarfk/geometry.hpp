#pragma once

// Polarization algebra on rasterized planar sets.
//
// Sets live on a uniform square grid as cell indicators. A polarizer is an
// open half-plane H = {x : x.h < s}; when its reflection maps grid nodes to
// nodes and cell centers to cell centers it is "grid compatible" and every
// operation below is evaluated exactly, pair of mirror cells by pair of
// mirror cells, with integer index arithmetic.

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace polarfk {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double t, Vec2 a) { return {t * a.x, t * a.y}; }
  friend Vec2 operator*(Vec2 a, double t) { return {t * a.x, t * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
/// Counter-clockwise rotation by `angle` radians about the origin.
inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

/// Uniform square grid. Cell (i,j) has center origin + ((i+1/2)D, (j+1/2)D),
/// node (i,j) sits at origin + (iD, jD).
class Grid {
 public:
  Grid(Vec2 origin, double spacing, int nx, int ny);

  Vec2 origin() const { return origin_; }
  double spacing() const { return spacing_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  int cell_count() const { return nx_ * ny_; }
  int node_count() const { return (nx_ + 1) * (ny_ + 1); }
  int cell_index(int i, int j) const { return i + j * nx_; }
  int node_index(int i, int j) const { return i + j * (nx_ + 1); }
  Vec2 cell_center(int i, int j) const {
    return {origin_.x + (i + 0.5) * spacing_, origin_.y + (j + 0.5) * spacing_};
  }
  Vec2 node(int i, int j) const {
    return {origin_.x + i * spacing_, origin_.y + j * spacing_};
  }
  Vec2 upper_corner() const {
    return {origin_.x + nx_ * spacing_, origin_.y + ny_ * spacing_};
  }

  // Grid whose cell centers are the nodes of this grid.
  Grid dual() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Vec2 origin_;
  double spacing_;
  int nx_;
  int ny_;
};

/// Square grid of spacing `spacing` with a node exactly at `center` that
/// covers the box center +/- half_extent.
Grid grid_around(Vec2 center, double half_extent, double spacing);

enum class Side : std::int8_t { Inside = -1, Boundary = 0, Outside = 1 };

/// Open affine half-plane H = {x : x.normal < offset}.
class Polarizer {
 public:
  // Throws DegeneratePolarizer unless |normal| = 1 within 1e-12.
  Polarizer(Vec2 normal, double offset);
  // Normalizes `direction` first.
  static Polarizer from_direction(Vec2 direction, double offset);
  // Half-plane {x : (x - point).normal < 0}.
  static Polarizer through(Vec2 point, Vec2 direction);

  Vec2 normal() const { return normal_; }
  double offset() const { return offset_; }

  bool contains(Vec2 x) const { return dot(x, normal_) < offset_; }
  Vec2 reflect(Vec2 x) const {
    return x - 2.0 * (dot(x, normal_) - offset_) * normal_;
  }
  bool grid_compatible(const Grid& grid) const;

  friend bool operator==(const Polarizer&, const Polarizer&) = default;

 private:
  Vec2 normal_;
  double offset_;
};

Vec2 reflect_point(const Polarizer& h, Vec2 x);

/// Boolean cell indicator over a grid.
class RasterSet {
 public:
  explicit RasterSet(Grid grid);
  RasterSet(Grid grid, std::vector<std::uint8_t> mask);

  const Grid& grid() const { return grid_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  bool operator[](int cell) const { return mask_[cell] != 0; }
  bool contains(int i, int j) const { return mask_[grid_.cell_index(i, j)] != 0; }
  void set(int cell, bool value) { mask_[cell] = value ? 1 : 0; }
  void set(int i, int j, bool value) { set(grid_.cell_index(i, j), value); }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool subset_of(const RasterSet& other) const;
  RasterSet complement() const;
  // Translation by (di, dj) cells; throws OutOfBounds if a member leaves.
  RasterSet shifted(int di, int dj) const;

  friend RasterSet operator|(const RasterSet& a, const RasterSet& b);
  friend RasterSet operator&(const RasterSet& a, const RasterSet& b);
  friend RasterSet operator-(const RasterSet& a, const RasterSet& b);
  friend bool operator==(const RasterSet&, const RasterSet&) = default;

 private:
  Grid grid_;
  std::vector<std::uint8_t> mask_;
};

/// Exact index form of sigma_H on one grid: mirror cell / node of every cell /
/// node (or -1 when the mirror leaves the grid) and the side of H it sits on.
class GridReflection {
 public:
  // Throws IncompatiblePolarizer.
  GridReflection(const Polarizer& h, const Grid& grid);

  int mirror_cell(int cell) const { return mirror_cell_[cell]; }
  Side cell_side(int cell) const { return cell_side_[cell]; }
  int mirror_node(int node) const { return mirror_node_[node]; }
  Side node_side(int node) const { return node_side_[node]; }

 private:
  std::vector<int> mirror_cell_;
  std::vector<Side> cell_side_;
  std::vector<int> mirror_node_;
  std::vector<Side> node_side_;
};

/// sigma_H(A). Throws OutOfBounds if a member cell is mirrored off the grid.
RasterSet reflect_set(const Polarizer& h, const RasterSet& a);

/// P_H(A) = [(A u sH A) n H] u [A n sH A].
RasterSet polarize_set(const Polarizer& h, const RasterSet& a);
/// P^H(A) = [(A u sH A) n H^c] u [A n sH A].
RasterSet dual_polarize_set(const Polarizer& h, const RasterSet& a);

struct WitnessSets {
  RasterSet a_h;  // sH(O) n O^c n H: nonempty iff P_H(O) != O
  RasterSet b_h;  // O n sH(O^c) n H: nonempty iff P_H(O) != sH(O)
};
WitnessSets witness_sets(const Polarizer& h, const RasterSet& omega);

// sH(A) n H is a subset of A, i.e. P_H(A) = A.
bool is_polarization_invariant(const Polarizer& h, const RasterSet& a);
// sH(A) n H^c is a subset of A, i.e. P^H(A) = A.
bool is_dual_polarization_invariant(const Polarizer& h, const RasterSet& a);
bool is_reflection_symmetric(const Polarizer& h, const RasterSet& a);

enum class SymmetryAxis {
  X,         // hyperplane {x = offset}
  Y,         // hyperplane {y = offset}
  Diag,      // hyperplane {(x + y)/sqrt2 = offset}
  AntiDiag,  // hyperplane {(x - y)/sqrt2 = offset}
};
Vec2 axis_normal(SymmetryAxis axis);
std::optional<SymmetryAxis> axis_from_normal(Vec2 normal);

struct SteinerReport {
  bool symmetric = false;
  // First offset s of the sweep at which the polarization test failed.
  std::optional<double> violating_offset;
};

/// Steiner symmetry about the hyperplane {x.n = offset} by the polarization
/// sweep: P_{H_s}(A) = A for all compatible s >= offset and P^{H_s}(A) = A for
/// all compatible s <= offset, over the grid's bounding box.
SteinerReport is_steiner_symmetric(const RasterSet& a, SymmetryAxis axis, double offset);
/// Same property by the direct definition: every line of cells orthogonal to
/// the hyperplane is empty or one contiguous run centered on it.
bool steiner_sections_centered(const RasterSet& a, SymmetryAxis axis, double offset);

/// Necessary condition for foliated Schwarz symmetry about a + R+ eta:
/// P^H(A) = sH(A) for every polarizer of the pool. Throws PoolViolation when a
/// pool member does not have `a` on its boundary or the open ray inside.
bool is_foliated_schwarz(const RasterSet& a, Vec2 center, Vec2 eta,
                         const std::vector<Polarizer>& pool);

/// Grid-compatible polarizers with `center` on the boundary and the ray
/// center + R+ eta inside, at most `max_size` of them.
std::vector<Polarizer> default_pool(const Grid& grid, Vec2 center, Vec2 eta,
                                    std::size_t max_size = 8);

/// H = {z : (z - a).h < 0} with h = R_s(eta) - R_t(eta); R_s rotates
/// counter-clockwise by arccos(s). Its reflection maps the ray a + R+ R_t(eta)
/// onto a + R+ R_s(eta). Throws DegeneratePolarizer when s == t.
Polarizer rotation_polarizer(Vec2 a, Vec2 eta, double s, double t);

struct Components {
  int count = 0;
  std::vector<int> labels;  // -1 outside the set, else 0..count-1 in scan order
};
/// 4-connected components.
Components connected_components(const RasterSet& a);

/// Plain PGM (P2, maxval 1), top row first.
void write_pgm(const RasterSet& a, std::ostream& out);

}  // namespace polarfk
