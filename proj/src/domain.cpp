#include "polarfk/domain.hpp"

#include <string>

#include "polarfk/errors.hpp"

namespace polarfk {

const char* to_string(Boundary bc) {
  return bc == Boundary::Dirichlet ? "dirichlet" : "neumann";
}

bool compactly_inside(const RasterSet& inner, const RasterSet& outer) {
  const Grid& g = inner.grid();
  if (!(g == outer.grid())) throw InvalidShape("raster sets live on different grids");
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!inner.contains(i, j)) continue;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= g.nx() || b >= g.ny()) return false;
          if (!outer.contains(a, b)) return false;
        }
    }
  return true;
}

namespace {

bool edge_touch(const RasterSet& a, const RasterSet& b) {
  const Grid& g = a.grid();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!a.contains(i, j)) continue;
      if (b.contains(i, j)) return true;
      if (i > 0 && b.contains(i - 1, j)) return true;
      if (i + 1 < g.nx() && b.contains(i + 1, j)) return true;
      if (j > 0 && b.contains(i, j - 1)) return true;
      if (j + 1 < g.ny() && b.contains(i, j + 1)) return true;
    }
  return false;
}

}  // namespace

PuncturedDomain::PuncturedDomain(RasterSet outer, std::vector<Obstacle> obstacles,
                                 Boundary bc_outer, Boundary bc_inner, bool allow_pure_neumann)
    : outer_(std::move(outer)),
      obstacles_(std::move(obstacles)),
      bc_outer_(bc_outer),
      bc_inner_(bc_inner),
      allow_pure_neumann_(allow_pure_neumann) {
  for (std::size_t k = 0; k < obstacles_.size(); ++k) {
    const RasterSet& o = obstacles_[k].cells;
    if (!(o.grid() == outer_.grid()))
      throw MalformedDomain("obstacle " + std::to_string(k) + " lives on another grid");
    if (o.empty()) throw MalformedDomain("obstacle " + std::to_string(k) + " is empty");
    if (!compactly_inside(o, outer_))
      throw MalformedDomain("obstacle " + std::to_string(k) +
                            " is not separated from the outer boundary by a free ring");
    for (std::size_t l = 0; l < k; ++l)
      if (edge_touch(o, obstacles_[l].cells))
        throw MalformedDomain("obstacles " + std::to_string(l) + " and " + std::to_string(k) +
                              " touch");
  }
  const RasterSet free = free_cells();
  if (free.empty()) throw MalformedDomain("domain has no free cells");
  if (connected_components(free).count != 1)
    throw MalformedDomain("free region is not edge connected");
  if (!allow_pure_neumann_ && !has_dirichlet())
    throw MalformedDomain("no Dirichlet boundary and pure Neumann not requested");
}

RasterSet PuncturedDomain::obstacle_union() const {
  RasterSet u(outer_.grid());
  for (const auto& o : obstacles_) u = u | o.cells;
  return u;
}

RasterSet PuncturedDomain::free_cells() const { return outer_ - obstacle_union(); }

bool PuncturedDomain::has_dirichlet() const {
  if (bc_outer_ == Boundary::Dirichlet) return true;
  for (std::size_t k = 0; k < obstacles_.size(); ++k)
    if (obstacle_bc(k) == Boundary::Dirichlet) return true;
  return false;
}

bool is_admissible(const Polarizer& h, const PuncturedDomain& d) {
  if (d.obstacles().empty()) return true;
  RasterSet mirrored(d.grid());
  try {
    mirrored = reflect_set(h, d.obstacle_union());
  } catch (const OutOfBounds&) {
    return false;
  }
  return compactly_inside(mirrored, d.outer());
}

PuncturedDomain polarize_punctured(const Polarizer& h, const PuncturedDomain& d) {
  const GridReflection refl(h, d.grid());
  if (!is_admissible(h, d))
    throw NotAdmissible("reflected obstacles leave the outer set");
  RasterSet outer = polarize_set(h, d.outer());
  const RasterSet holes = dual_polarize_set(h, d.obstacle_union());

  // Owner of every original obstacle cell.
  std::vector<int> owner(static_cast<std::size_t>(d.grid().cell_count()), -1);
  for (std::size_t k = 0; k < d.obstacles().size(); ++k)
    for (int c = 0; c < d.grid().cell_count(); ++c)
      if (d.obstacles()[k].cells[c]) owner[c] = static_cast<int>(k);

  const Components comps = connected_components(holes);
  std::vector<Obstacle> obstacles;
  for (int label = 0; label < comps.count; ++label) {
    RasterSet cells(d.grid());
    std::optional<std::optional<Boundary>> tag;
    std::optional<Boundary> effective;
    for (int c = 0; c < d.grid().cell_count(); ++c) {
      if (comps.labels[c] != label) continue;
      cells.set(c, true);
      for (int src : {c, refl.mirror_cell(c)}) {
        if (src < 0 || owner[src] < 0) continue;
        const auto k = static_cast<std::size_t>(owner[src]);
        const Boundary eff = d.obstacle_bc(k);
        if (effective && *effective != eff)
          throw MalformedDomain("polarized obstacle merges Dirichlet and Neumann obstacles");
        effective = eff;
        const auto own = d.obstacles()[k].bc;
        if (!tag) tag = own;
        else if (*tag != own) tag = std::optional<Boundary>(eff);
      }
    }
    obstacles.push_back({std::move(cells), tag ? *tag : std::nullopt});
  }
  PuncturedDomain out(std::move(outer), std::move(obstacles), d.bc_outer(), d.bc_inner(),
                      d.allow_pure_neumann());
  if (out.free_cells().count() != d.free_cells().count())
    throw MalformedDomain("polarization changed the free area");
  return out;
}

PuncturedDomain reflect_domain(const Polarizer& h, const PuncturedDomain& d) {
  std::vector<Obstacle> obstacles;
  for (const auto& o : d.obstacles()) obstacles.push_back({reflect_set(h, o.cells), o.bc});
  return PuncturedDomain(reflect_set(h, d.outer()), std::move(obstacles), d.bc_outer(),
                         d.bc_inner(), d.allow_pure_neumann());
}

}  // namespace polarfk
