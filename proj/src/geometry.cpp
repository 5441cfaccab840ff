#include "polarfk/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "polarfk/errors.hpp"

namespace polarfk {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kIndexTol = 1e-7;

// Reflection in half-grid units: X = 2(x - ox)/D, so cell centers are odd
// and nodes are even integers. Axis mirrors: X' = 2C - X (C = mirror line).
// Diagonal mirrors: d = hx X + hy Y - S, (X', Y') = (X - d hx, Y - d hy).
struct HalfUnitMirror {
  int hx = 0;
  int hy = 0;
  bool diagonal = false;
  long line = 0;  // C for axis normals, S for diagonal ones

  // Signed distance to the mirror line in (scaled) half units; negative
  // inside H.
  long side(long X, long Y) const {
    if (!diagonal) return hx != 0 ? hx * (X - line) : hy * (Y - line);
    return hx * X + hy * Y - line;
  }
  void map(long X, long Y, long& Xr, long& Yr) const {
    if (!diagonal) {
      Xr = hx != 0 ? 2 * line - X : X;
      Yr = hy != 0 ? 2 * line - Y : Y;
      return;
    }
    const long d = hx * X + hy * Y - line;
    Xr = X - d * hx;
    Yr = Y - d * hy;
  }
};

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

std::optional<HalfUnitMirror> half_unit_mirror(const Polarizer& h, const Grid& g) {
  const Vec2 n = h.normal();
  const double dlt = g.spacing();
  const Vec2 o = g.origin();
  HalfUnitMirror m;
  double line = 0.0;
  if (std::abs(std::abs(n.x) - 1.0) <= kUnitTol && std::abs(n.y) <= kUnitTol) {
    m.hx = sign_of(n.x);
    line = 2.0 * (h.offset() * m.hx - o.x) / dlt;
  } else if (std::abs(std::abs(n.y) - 1.0) <= kUnitTol && std::abs(n.x) <= kUnitTol) {
    m.hy = sign_of(n.y);
    line = 2.0 * (h.offset() * m.hy - o.y) / dlt;
  } else if (std::abs(std::abs(n.x) - M_SQRT1_2) <= kUnitTol &&
             std::abs(std::abs(n.y) - M_SQRT1_2) <= kUnitTol) {
    m.diagonal = true;
    m.hx = sign_of(n.x);
    m.hy = sign_of(n.y);
    line = 2.0 * (h.offset() * M_SQRT2 - m.hx * o.x - m.hy * o.y) / dlt;
  } else {
    return std::nullopt;
  }
  const double rounded = std::round(line);
  if (std::abs(line - rounded) > kIndexTol * std::max(1.0, std::abs(line))) return std::nullopt;
  if (std::abs(rounded) > 1e15) return std::nullopt;
  m.line = static_cast<long>(rounded);
  if (m.diagonal && (m.line % 2 != 0)) return std::nullopt;
  return m;
}

Side to_side(long s) {
  return s < 0 ? Side::Inside : (s > 0 ? Side::Outside : Side::Boundary);
}

void require_same_grid(const RasterSet& a, const RasterSet& b) {
  if (!(a.grid() == b.grid())) throw InvalidShape("raster sets live on different grids");
}

}  // namespace

Grid::Grid(Vec2 origin, double spacing, int nx, int ny)
    : origin_(origin), spacing_(spacing), nx_(nx), ny_(ny) {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw InvalidConfig("grid spacing must be positive and finite");
  if (nx < 2 || ny < 2) throw InvalidConfig("grid needs nx, ny >= 2");
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
    throw InvalidConfig("grid origin must be finite");
}

Grid Grid::dual() const {
  return Grid({origin_.x - 0.5 * spacing_, origin_.y - 0.5 * spacing_}, spacing_, nx_ + 1,
              ny_ + 1);
}

Grid grid_around(Vec2 center, double half_extent, double spacing) {
  const int k = static_cast<int>(std::ceil(half_extent / spacing - 1e-9)) + 2;
  return Grid({center.x - k * spacing, center.y - k * spacing}, spacing, 2 * k, 2 * k);
}

Polarizer::Polarizer(Vec2 normal, double offset) : normal_(normal), offset_(offset) {
  if (!std::isfinite(offset) || !std::isfinite(normal.x) || !std::isfinite(normal.y) ||
      std::abs(norm(normal) - 1.0) > kUnitTol)
    throw DegeneratePolarizer("polarizer normal must be a unit vector");
}

Polarizer Polarizer::from_direction(Vec2 direction, double offset) {
  const double len = norm(direction);
  if (!(len > 0.0) || !std::isfinite(len))
    throw DegeneratePolarizer("polarizer direction is zero");
  return Polarizer((1.0 / len) * direction, offset);
}

Polarizer Polarizer::through(Vec2 point, Vec2 direction) {
  const double len = norm(direction);
  if (!(len > 0.0) || !std::isfinite(len))
    throw DegeneratePolarizer("polarizer direction is zero");
  const Vec2 n = (1.0 / len) * direction;
  return Polarizer(n, dot(point, n));
}

bool Polarizer::grid_compatible(const Grid& grid) const {
  return half_unit_mirror(*this, grid).has_value();
}

Vec2 reflect_point(const Polarizer& h, Vec2 x) { return h.reflect(x); }

RasterSet::RasterSet(Grid grid)
    : grid_(grid), mask_(static_cast<std::size_t>(grid.cell_count()), 0) {}

RasterSet::RasterSet(Grid grid, std::vector<std::uint8_t> mask)
    : grid_(grid), mask_(std::move(mask)) {
  if (mask_.size() != static_cast<std::size_t>(grid_.cell_count()))
    throw InvalidShape("mask length does not match the grid");
  for (auto& v : mask_) v = v ? 1 : 0;
}

std::size_t RasterSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

bool RasterSet::subset_of(const RasterSet& other) const {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < mask_.size(); ++k)
    if (mask_[k] && !other.mask_[k]) return false;
  return true;
}

RasterSet RasterSet::complement() const {
  RasterSet out(grid_);
  for (std::size_t k = 0; k < mask_.size(); ++k) out.mask_[k] = mask_[k] ? 0 : 1;
  return out;
}

RasterSet RasterSet::shifted(int di, int dj) const {
  RasterSet out(grid_);
  for (int j = 0; j < grid_.ny(); ++j)
    for (int i = 0; i < grid_.nx(); ++i) {
      if (!contains(i, j)) continue;
      const int a = i + di, b = j + dj;
      if (a < 0 || b < 0 || a >= grid_.nx() || b >= grid_.ny())
        throw OutOfBounds("shifted raster leaves the grid");
      out.set(a, b, true);
    }
  return out;
}

RasterSet operator|(const RasterSet& a, const RasterSet& b) {
  require_same_grid(a, b);
  RasterSet out(a.grid_);
  for (std::size_t k = 0; k < a.mask_.size(); ++k) out.mask_[k] = a.mask_[k] | b.mask_[k];
  return out;
}

RasterSet operator&(const RasterSet& a, const RasterSet& b) {
  require_same_grid(a, b);
  RasterSet out(a.grid_);
  for (std::size_t k = 0; k < a.mask_.size(); ++k) out.mask_[k] = a.mask_[k] & b.mask_[k];
  return out;
}

RasterSet operator-(const RasterSet& a, const RasterSet& b) {
  require_same_grid(a, b);
  RasterSet out(a.grid_);
  for (std::size_t k = 0; k < a.mask_.size(); ++k)
    out.mask_[k] = a.mask_[k] && !b.mask_[k] ? 1 : 0;
  return out;
}

GridReflection::GridReflection(const Polarizer& h, const Grid& g) {
  const auto m = half_unit_mirror(h, g);
  if (!m) throw IncompatiblePolarizer("reflection does not map the grid onto itself");
  mirror_cell_.resize(static_cast<std::size_t>(g.cell_count()));
  cell_side_.resize(mirror_cell_.size());
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const long X = 2L * i + 1, Y = 2L * j + 1;
      long Xr = 0, Yr = 0;
      m->map(X, Y, Xr, Yr);
      const long ir = (Xr - 1) / 2, jr = (Yr - 1) / 2;
      const bool in = Xr > 0 && Yr > 0 && ir < g.nx() && jr < g.ny();
      const int c = g.cell_index(i, j);
      mirror_cell_[c] = in ? g.cell_index(static_cast<int>(ir), static_cast<int>(jr)) : -1;
      cell_side_[c] = to_side(m->side(X, Y));
    }
  mirror_node_.resize(static_cast<std::size_t>(g.node_count()));
  node_side_.resize(mirror_node_.size());
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) {
      const long X = 2L * i, Y = 2L * j;
      long Xr = 0, Yr = 0;
      m->map(X, Y, Xr, Yr);
      const long ir = Xr / 2, jr = Yr / 2;
      const bool in = Xr >= 0 && Yr >= 0 && ir <= g.nx() && jr <= g.ny();
      const int n = g.node_index(i, j);
      mirror_node_[n] = in ? g.node_index(static_cast<int>(ir), static_cast<int>(jr)) : -1;
      node_side_[n] = to_side(m->side(X, Y));
    }
}

RasterSet reflect_set(const Polarizer& h, const RasterSet& a) {
  const GridReflection r(h, a.grid());
  RasterSet out(a.grid());
  for (int c = 0; c < a.grid().cell_count(); ++c) {
    if (!a[c]) continue;
    const int m = r.mirror_cell(c);
    if (m < 0) throw OutOfBounds("reflected set leaves the grid");
    out.set(m, true);
  }
  return out;
}

namespace {

// Shared kernel of P_H and P^H; `toward` is the side that receives the union.
RasterSet polarize_toward(const Polarizer& h, const RasterSet& a, Side toward) {
  const GridReflection r(h, a.grid());
  RasterSet out(a.grid());
  for (int c = 0; c < a.grid().cell_count(); ++c) {
    const int m = r.mirror_cell(c);
    const bool here = a[c];
    const bool there = m >= 0 && a[m];
    const Side side = r.cell_side(c);
    bool v = here;
    if (side == toward) {
      v = here || there;
    } else if (side != Side::Boundary) {
      v = here && there;
      if (here && m < 0) throw OutOfBounds("polarization moves mass off the grid");
    }
    out.set(c, v);
  }
  return out;
}

// sH(A) n {side} is a subset of A.
bool mirror_subset_on(const Polarizer& h, const RasterSet& a, Side side) {
  const GridReflection r(h, a.grid());
  for (int c = 0; c < a.grid().cell_count(); ++c) {
    if (!a[c]) continue;
    const int m = r.mirror_cell(c);
    // c in A has its mirror on the opposite side of the given one.
    const Side sc = r.cell_side(c);
    if (sc == Side::Boundary || sc == side) continue;
    if (m < 0 || !a[m]) return false;
  }
  return true;
}

}  // namespace

RasterSet polarize_set(const Polarizer& h, const RasterSet& a) {
  return polarize_toward(h, a, Side::Inside);
}

RasterSet dual_polarize_set(const Polarizer& h, const RasterSet& a) {
  return polarize_toward(h, a, Side::Outside);
}

WitnessSets witness_sets(const Polarizer& h, const RasterSet& omega) {
  const GridReflection r(h, omega.grid());
  RasterSet ah(omega.grid()), bh(omega.grid());
  for (int c = 0; c < omega.grid().cell_count(); ++c) {
    if (r.cell_side(c) != Side::Inside) continue;
    const int m = r.mirror_cell(c);
    const bool mirror_in = m >= 0 && omega[m];
    ah.set(c, mirror_in && !omega[c]);
    bh.set(c, omega[c] && !mirror_in);
  }
  return {ah, bh};
}

bool is_polarization_invariant(const Polarizer& h, const RasterSet& a) {
  return mirror_subset_on(h, a, Side::Inside);
}

bool is_dual_polarization_invariant(const Polarizer& h, const RasterSet& a) {
  return mirror_subset_on(h, a, Side::Outside);
}

bool is_reflection_symmetric(const Polarizer& h, const RasterSet& a) {
  return is_polarization_invariant(h, a) && is_dual_polarization_invariant(h, a);
}

Vec2 axis_normal(SymmetryAxis axis) {
  switch (axis) {
    case SymmetryAxis::X: return {1.0, 0.0};
    case SymmetryAxis::Y: return {0.0, 1.0};
    case SymmetryAxis::Diag: return {M_SQRT1_2, M_SQRT1_2};
    case SymmetryAxis::AntiDiag: return {M_SQRT1_2, -M_SQRT1_2};
  }
  return {1.0, 0.0};
}

std::optional<SymmetryAxis> axis_from_normal(Vec2 n) {
  for (auto ax : {SymmetryAxis::X, SymmetryAxis::Y, SymmetryAxis::Diag, SymmetryAxis::AntiDiag})
    if (norm(n - axis_normal(ax)) <= 1e-12) return ax;
  return std::nullopt;
}

namespace {

// Range of the half-unit line parameter over the grid, and its step.
struct LineSweep {
  long lo = 0, hi = 0, step = 1;
};

LineSweep sweep_range(const Grid& g, const HalfUnitMirror& m) {
  LineSweep r;
  const std::array<std::array<long, 2>, 4> corners{
      {{0, 0}, {2L * g.nx(), 0}, {0, 2L * g.ny()}, {2L * g.nx(), 2L * g.ny()}}};
  r.lo = std::numeric_limits<long>::max();
  r.hi = std::numeric_limits<long>::min();
  for (const auto& c : corners) {
    long v = 0;
    if (!m.diagonal)
      v = m.hx != 0 ? c[0] : c[1];
    else
      v = m.hx * c[0] + m.hy * c[1];
    r.lo = std::min(r.lo, v);
    r.hi = std::max(r.hi, v);
  }
  r.step = m.diagonal ? 2 : 1;
  if (m.diagonal) {
    if (r.lo % 2 != 0) ++r.lo;
    if (r.hi % 2 != 0) --r.hi;
  }
  return r;
}

double offset_from_line(const Grid& g, const HalfUnitMirror& m, long line) {
  const Vec2 o = g.origin();
  const double dlt = g.spacing();
  if (!m.diagonal) {
    const int h = m.hx != 0 ? m.hx : m.hy;
    const double base = m.hx != 0 ? o.x : o.y;
    return h * (0.5 * dlt * line + base);
  }
  return (0.5 * dlt * line + m.hx * o.x + m.hy * o.y) / M_SQRT2;
}

}  // namespace

SteinerReport is_steiner_symmetric(const RasterSet& a, SymmetryAxis axis, double offset) {
  const Vec2 n = axis_normal(axis);
  const Polarizer h0(n, offset);
  const auto m0 = half_unit_mirror(h0, a.grid());
  if (!m0) throw IncompatiblePolarizer("Steiner hyperplane is not grid compatible");
  const LineSweep range = sweep_range(a.grid(), *m0);
  SteinerReport report;
  for (long line = range.lo; line <= range.hi; line += range.step) {
    const double s = offset_from_line(a.grid(), *m0, line);
    const Polarizer hs(n, s);
    bool ok = true;
    if (line >= m0->line) ok = is_polarization_invariant(hs, a);
    if (ok && line <= m0->line) ok = is_dual_polarization_invariant(hs, a);
    if (!ok) {
      report.violating_offset = s;
      return report;
    }
  }
  report.symmetric = true;
  return report;
}

bool steiner_sections_centered(const RasterSet& a, SymmetryAxis axis, double offset) {
  const Grid& g = a.grid();
  const auto m = half_unit_mirror(Polarizer(axis_normal(axis), offset), g);
  if (!m) throw IncompatiblePolarizer("Steiner hyperplane is not grid compatible");
  // Walk every orthogonal chain of cells: (i, j) + k*(di, dj).
  int di = 0, dj = 0;
  switch (axis) {
    case SymmetryAxis::X: di = 1; break;
    case SymmetryAxis::Y: dj = 1; break;
    case SymmetryAxis::Diag: di = 1; dj = 1; break;
    case SymmetryAxis::AntiDiag: di = 1; dj = -1; break;
  }
  const auto starts_chain = [&](int i, int j) {
    const int pi = i - di, pj = j - dj;
    return pi < 0 || pj < 0 || pi >= g.nx() || pj >= g.ny();
  };
  for (int j0 = 0; j0 < g.ny(); ++j0)
    for (int i0 = 0; i0 < g.nx(); ++i0) {
      if (!starts_chain(i0, j0)) continue;
      long first = 0, last = 0;
      int runs = 0;
      bool prev = false;
      for (int i = i0, j = j0; i >= 0 && j >= 0 && i < g.nx() && j < g.ny(); i += di, j += dj) {
        const bool cur = a.contains(i, j);
        if (cur) {
          const long t = m->side(2L * i + 1, 2L * j + 1);
          if (!prev) {
            ++runs;
            first = t;
          }
          last = t;
        }
        prev = cur;
      }
      if (runs == 0) continue;
      if (runs > 1 || first + last != 0) return false;
    }
  return true;
}

bool is_foliated_schwarz(const RasterSet& a, Vec2 center, Vec2 eta,
                         const std::vector<Polarizer>& pool) {
  for (const auto& h : pool) {
    if (std::abs(dot(center, h.normal()) - h.offset()) > 1e-9)
      throw PoolViolation("pool polarizer boundary misses the center");
    if (!(dot(eta, h.normal()) < -1e-12))
      throw PoolViolation("pool polarizer does not contain the symmetry ray");
  }
  // P^H(A) = sH(A) is the same statement as P_H(A) = A.
  for (const auto& h : pool)
    if (!is_polarization_invariant(h, a)) return false;
  return true;
}

std::vector<Polarizer> default_pool(const Grid& grid, Vec2 center, Vec2 eta,
                                    std::size_t max_size) {
  const double r = M_SQRT1_2;
  const std::array<Vec2, 8> normals{{{-1, 0}, {-r, r}, {-r, -r}, {0, 1},
                                     {0, -1}, {r, r}, {r, -r}, {1, 0}}};
  std::vector<Polarizer> pool;
  for (const Vec2 n : normals) {
    if (pool.size() >= max_size) break;
    if (!(dot(eta, n) < -1e-12)) continue;
    const Polarizer h(n, dot(center, n));
    if (h.grid_compatible(grid)) pool.push_back(h);
  }
  return pool;
}

Polarizer rotation_polarizer(Vec2 a, Vec2 eta, double s, double t) {
  if (!(s >= -1.0 && s <= 1.0 && t >= -1.0 && t <= 1.0))
    throw DegeneratePolarizer("rotation parameters must lie in [-1, 1]");
  if (s == t) throw DegeneratePolarizer("rotation parameters coincide");
  const Vec2 h = rotate(eta, std::acos(s)) - rotate(eta, std::acos(t));
  if (norm(h) < 1e-14) throw DegeneratePolarizer("rotation parameters coincide");
  return Polarizer::through(a, h);
}

Components connected_components(const RasterSet& a) {
  const Grid& g = a.grid();
  Components out;
  out.labels.assign(static_cast<std::size_t>(g.cell_count()), -1);
  std::vector<int> stack;
  for (int c = 0; c < g.cell_count(); ++c) {
    if (!a[c] || out.labels[c] >= 0) continue;
    const int label = out.count++;
    out.labels[c] = label;
    stack.push_back(c);
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      const int i = k % g.nx(), j = k / g.nx();
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& q : nb) {
        if (q[0] < 0 || q[1] < 0 || q[0] >= g.nx() || q[1] >= g.ny()) continue;
        const int kk = g.cell_index(q[0], q[1]);
        if (a[kk] && out.labels[kk] < 0) {
          out.labels[kk] = label;
          stack.push_back(kk);
        }
      }
    }
  }
  return out;
}

void write_pgm(const RasterSet& a, std::ostream& out) {
  const Grid& g = a.grid();
  out << "P2\n" << g.nx() << ' ' << g.ny() << "\n1\n";
  for (int j = g.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx(); ++i) out << (i ? " " : "") << (a.contains(i, j) ? 1 : 0);
    out << '\n';
  }
}

}  // namespace polarfk
