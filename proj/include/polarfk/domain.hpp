#pragma once

#include <optional>
#include <vector>

#include "polarfk/geometry.hpp"

namespace polarfk {

enum class Boundary { Dirichlet, Neumann };

const char* to_string(Boundary bc);

/// Closed obstacle raster with an optional label overriding the domain's
/// inner boundary condition.
struct Obstacle {
  RasterSet cells;
  std::optional<Boundary> bc;
};

/// Outer open set minus closed obstacles. Construction checks, in cells:
/// obstacles inside the outer set and two cells away from its complement,
/// obstacles pairwise disjoint and not edge adjacent, a nonempty 4-connected
/// free region, and a Dirichlet family unless pure Neumann is requested.
/// Violations throw MalformedDomain.
class PuncturedDomain {
 public:
  PuncturedDomain(RasterSet outer, std::vector<Obstacle> obstacles, Boundary bc_outer,
                  Boundary bc_inner, bool allow_pure_neumann = false);

  const Grid& grid() const { return outer_.grid(); }
  const RasterSet& outer() const { return outer_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  Boundary bc_outer() const { return bc_outer_; }
  Boundary bc_inner() const { return bc_inner_; }
  bool allow_pure_neumann() const { return allow_pure_neumann_; }

  Boundary obstacle_bc(std::size_t k) const { return obstacles_[k].bc.value_or(bc_inner_); }
  RasterSet obstacle_union() const;
  RasterSet free_cells() const;
  bool has_dirichlet() const;

 private:
  RasterSet outer_;
  std::vector<Obstacle> obstacles_;
  Boundary bc_outer_;
  Boundary bc_inner_;
  bool allow_pure_neumann_;
};

/// True when every cell of `inner` has its 3x3 neighbourhood inside `outer`
/// (cells beyond the grid count as outside).
bool compactly_inside(const RasterSet& inner, const RasterSet& outer);

/// Admissibility of H for D: sH(obstacles) lies compactly inside the outer set.
bool is_admissible(const Polarizer& h, const PuncturedDomain& d);

/// P_H(D): outer' = P_H(outer), obstacles' = components of P^H(union of
/// obstacles), each labelled by the obstacles it was built from. Throws
/// NotAdmissible when H is not admissible, MalformedDomain when a new
/// component merges obstacles with different labels.
PuncturedDomain polarize_punctured(const Polarizer& h, const PuncturedDomain& d);

/// sH(D); every obstacle keeps its label.
PuncturedDomain reflect_domain(const Polarizer& h, const PuncturedDomain& d);

}  // namespace polarfk
