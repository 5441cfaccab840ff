#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polarfk/geometry.hpp"

namespace polarfk {

/// Nodal values on a grid together with the cells of the domain they live on.
class GridFunction {
 public:
  // Checks finiteness and that nodes touching no support cell carry 0.
  GridFunction(Grid grid, std::vector<double> values, RasterSet support);

  static GridFunction zeros(const RasterSet& support);
  // 1 on the nodes marked by `nodes` (a raster on grid.dual()), 0 elsewhere;
  // the support is every cell touching a marked node.
  static GridFunction indicator(const Grid& grid, const RasterSet& nodes);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  const RasterSet& support() const { return support_; }
  double operator[](int node) const { return values_[node]; }
  double at(int i, int j) const { return values_[grid_.node_index(i, j)]; }

 private:
  struct Unchecked {};
  GridFunction(Unchecked, Grid grid, std::vector<double> values, RasterSet support);
  friend GridFunction polarize_function(const Polarizer&, const GridFunction&);
  friend GridFunction unchecked_function(Grid, std::vector<double>, RasterSet);

  Grid grid_;
  std::vector<double> values_;
  RasterSet support_;
};

/// Skips the zero-extension check; used for differences of functions whose
/// supports differ.
GridFunction unchecked_function(Grid grid, std::vector<double> values, RasterSet support);

/// max(u, u o sH) on the H side, min on the other, unchanged on dH. The
/// support becomes P_H(support). Throws SignedInput for negative values and
/// OutOfBounds when positive values would be mirrored off the grid.
GridFunction polarize_function(const Polarizer& h, const GridFunction& u);

/// Lumped weights: D^2 * (number of active cells touching the node) / 4.
std::vector<double> node_weights(const RasterSet& active);

double nodal_p_norm(const GridFunction& u, double p);

/// Nodes with u > threshold as a raster on grid.dual(): dual cell (i, j) is
/// node (i, j) of the primal grid.
RasterSet support_set(const GridFunction& u, double threshold = 0.0);

struct NonexpansiveReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// lhs = |P_H u - P_H v|_p, rhs = |u - v|_p, both with the lumped weights of
/// S u sH(S), S the union of the two supports.
NonexpansiveReport check_nonexpansive(const GridFunction& u, const GridFunction& v,
                                      const Polarizer& h, double p);

/// Plain PGM (P2, maxval 255), values rescaled by the maximum, top row first.
void write_pgm(const GridFunction& u, std::ostream& out);
/// CSV with header `node,x,y,value`.
void write_csv(const GridFunction& u, std::ostream& out);

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double v);

}  // namespace polarfk
