#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "polarfk/domain.hpp"
#include "polarfk/rearrange.hpp"

namespace polarfk {

struct BoundaryEdge {
  int node_a = 0;  // grid node indices
  int node_b = 0;
};

struct BoundaryClassification {
  std::vector<BoundaryEdge> outer;
  std::vector<std::vector<BoundaryEdge>> holes;
  std::vector<Boundary> hole_bc;
};

/// Splits the boundary edges of the free region by the 4-connected components
/// of its complement: the unbounded component is the outer boundary, every
/// other component is one hole. A hole carries the label of the obstacle it
/// contains, or the outer label when it is a gap of the outer set itself.
BoundaryClassification classify_boundaries(const PuncturedDomain& d);

struct Triangle {
  std::array<int, 3> nodes{};      // grid node indices
  double area = 0.0;
  std::array<Vec2, 3> grad{};      // gradients of the three hat functions
};

/// P1 mesh: every free cell is cut along its lower-left to upper-right
/// diagonal. Nodes carry grid node indices; Dirichlet nodes are eliminated.
class TriMesh {
 public:
  const Grid& grid() const { return grid_; }
  const RasterSet& free_cells() const { return free_cells_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<double>& weights() const { return weights_; }

  bool active(int node) const { return weights_[node] > 0.0; }
  bool dirichlet(int node) const { return dirichlet_[node] != 0; }
  // Compact unknown index or -1 for inactive and Dirichlet nodes.
  int free_index(int node) const { return free_index_[node]; }
  const std::vector<int>& free_nodes() const { return free_nodes_; }
  std::size_t free_count() const { return free_nodes_.size(); }
  std::size_t dirichlet_count() const;

  // Free-vector <-> GridFunction on free_cells(); Dirichlet and inactive
  // nodes get 0.
  GridFunction expand(const std::vector<double>& x) const;
  std::vector<double> restrict_to_free(const GridFunction& u) const;

 private:
  friend TriMesh triangulate(const PuncturedDomain& d);
  explicit TriMesh(Grid grid) : grid_(grid), free_cells_(grid) {}

  Grid grid_;
  RasterSet free_cells_;
  std::vector<Triangle> triangles_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> dirichlet_;
  std::vector<int> free_index_;
  std::vector<int> free_nodes_;
};

TriMesh triangulate(const PuncturedDomain& d);

// Free-vector forms: x holds values on free_nodes().
double energy_p(const TriMesh& m, const std::vector<double>& x, double p);
std::vector<double> grad_energy_p(const TriMesh& m, const std::vector<double>& x, double p);
double mass_p(const TriMesh& m, const std::vector<double>& x, double p);
std::vector<double> grad_mass_p(const TriMesh& m, const std::vector<double>& x, double p);

// GridFunction forms; throw DirichletViolation when |u| > 1e-14 on a pinned node.
double energy_p(const TriMesh& m, const GridFunction& u, double p);
std::vector<double> grad_energy_p(const TriMesh& m, const GridFunction& u, double p);
double mass_p(const TriMesh& m, const GridFunction& u, double p);
std::vector<double> grad_mass_p(const TriMesh& m, const GridFunction& u, double p);

/// One record per line: `node <id> <x> <y> <free|dirichlet>` then
/// `tri <a> <b> <c>`.
void write_mesh(const TriMesh& m, std::ostream& out);

}  // namespace polarfk
