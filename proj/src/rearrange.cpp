#include "polarfk/rearrange.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "polarfk/errors.hpp"

namespace polarfk {

namespace {

// Nodes touching at least one cell of `cells`.
std::vector<std::uint8_t> touched_nodes(const RasterSet& cells) {
  const Grid& g = cells.grid();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(g.node_count()), 0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!cells.contains(i, j)) continue;
      out[g.node_index(i, j)] = 1;
      out[g.node_index(i + 1, j)] = 1;
      out[g.node_index(i, j + 1)] = 1;
      out[g.node_index(i + 1, j + 1)] = 1;
    }
  return out;
}

double weighted_p_sum(const std::vector<double>& values, const std::vector<double>& w, double p) {
  double sum = 0.0;
  for (std::size_t n = 0; n < values.size(); ++n)
    if (w[n] > 0.0) sum += w[n] * std::pow(std::abs(values[n]), p);
  return sum;
}

}  // namespace

GridFunction::GridFunction(Unchecked, Grid grid, std::vector<double> values, RasterSet support)
    : grid_(grid), values_(std::move(values)), support_(std::move(support)) {
  if (values_.size() != static_cast<std::size_t>(grid_.node_count()))
    throw InvalidShape("value count does not match the grid nodes");
  if (!(support_.grid() == grid_)) throw InvalidShape("support lives on another grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidShape("grid function has a non-finite value");
}

GridFunction::GridFunction(Grid grid, std::vector<double> values, RasterSet support)
    : GridFunction(Unchecked{}, grid, std::move(values), std::move(support)) {
  const auto touched = touched_nodes(support_);
  for (std::size_t n = 0; n < values_.size(); ++n)
    if (!touched[n] && values_[n] != 0.0)
      throw InvalidShape("grid function is nonzero off its support");
}

GridFunction unchecked_function(Grid grid, std::vector<double> values, RasterSet support) {
  return GridFunction(GridFunction::Unchecked{}, grid, std::move(values), std::move(support));
}

GridFunction GridFunction::zeros(const RasterSet& support) {
  return GridFunction(support.grid(),
                      std::vector<double>(static_cast<std::size_t>(support.grid().node_count()), 0.0),
                      support);
}

GridFunction GridFunction::indicator(const Grid& grid, const RasterSet& nodes) {
  if (!(nodes.grid() == grid.dual())) throw InvalidShape("node set must live on the dual grid");
  std::vector<double> values(static_cast<std::size_t>(grid.node_count()), 0.0);
  RasterSet support(grid);
  for (int j = 0; j <= grid.ny(); ++j)
    for (int i = 0; i <= grid.nx(); ++i) {
      if (!nodes.contains(i, j)) continue;
      values[grid.node_index(i, j)] = 1.0;
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          const int a = i + di, b = j + dj;
          if (a >= 0 && b >= 0 && a < grid.nx() && b < grid.ny()) support.set(a, b, true);
        }
    }
  return GridFunction(grid, std::move(values), std::move(support));
}

GridFunction polarize_function(const Polarizer& h, const GridFunction& u) {
  for (double v : u.values())
    if (v < 0.0) throw SignedInput("only nonnegative functions are polarized");
  const Grid& g = u.grid();
  const GridReflection r(h, g);
  std::vector<double> out(u.values().size(), 0.0);
  for (int n = 0; n < g.node_count(); ++n) {
    const int m = r.mirror_node(n);
    const double here = u[n];
    const double there = m >= 0 ? u[m] : 0.0;
    switch (r.node_side(n)) {
      case Side::Inside: out[n] = std::max(here, there); break;
      case Side::Outside:
        if (m < 0 && here > 0.0) throw OutOfBounds("polarization moves values off the grid");
        out[n] = std::min(here, there);
        break;
      case Side::Boundary: out[n] = here; break;
    }
  }
  return GridFunction(GridFunction::Unchecked{}, g, std::move(out), polarize_set(h, u.support()));
}

std::vector<double> node_weights(const RasterSet& active) {
  const Grid& g = active.grid();
  const double q = 0.25 * g.spacing() * g.spacing();
  std::vector<double> w(static_cast<std::size_t>(g.node_count()), 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!active.contains(i, j)) continue;
      w[g.node_index(i, j)] += q;
      w[g.node_index(i + 1, j)] += q;
      w[g.node_index(i, j + 1)] += q;
      w[g.node_index(i + 1, j + 1)] += q;
    }
  return w;
}

double nodal_p_norm(const GridFunction& u, double p) {
  if (!(p >= 1.0)) throw InvalidConfig("p-norm needs p >= 1");
  return std::pow(weighted_p_sum(u.values(), node_weights(u.support()), p), 1.0 / p);
}

RasterSet support_set(const GridFunction& u, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidConfig("support threshold must be nonnegative");
  const Grid& g = u.grid();
  RasterSet out(g.dual());
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i)
      if (u.at(i, j) > threshold) out.set(i, j, true);
  return out;
}

NonexpansiveReport check_nonexpansive(const GridFunction& u, const GridFunction& v,
                                      const Polarizer& h, double p) {
  if (!(u.grid() == v.grid())) throw InvalidShape("functions live on different grids");
  if (!(p >= 1.0)) throw InvalidConfig("p-norm needs p >= 1");
  const GridFunction pu = polarize_function(h, u);
  const GridFunction pv = polarize_function(h, v);
  const RasterSet s = u.support() | v.support();
  const auto w = node_weights(s | reflect_set(h, s));
  std::vector<double> before(u.values().size()), after(u.values().size());
  for (std::size_t n = 0; n < before.size(); ++n) {
    before[n] = u[static_cast<int>(n)] - v[static_cast<int>(n)];
    after[n] = pu[static_cast<int>(n)] - pv[static_cast<int>(n)];
  }
  NonexpansiveReport r;
  r.lhs = std::pow(weighted_p_sum(after, w, p), 1.0 / p);
  r.rhs = std::pow(weighted_p_sum(before, w, p), 1.0 / p);
  r.ok = r.lhs <= r.rhs + 1e-12;
  return r;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_pgm(const GridFunction& u, std::ostream& out) {
  const Grid& g = u.grid();
  double top = 0.0;
  for (double v : u.values()) top = std::max(top, std::abs(v));
  out << "P2\n" << g.nx() + 1 << ' ' << g.ny() + 1 << "\n255\n";
  for (int j = g.ny(); j >= 0; --j) {
    for (int i = 0; i <= g.nx(); ++i) {
      const double v = top > 0.0 ? std::abs(u.at(i, j)) / top : 0.0;
      out << (i ? " " : "") << static_cast<int>(std::lround(255.0 * v));
    }
    out << '\n';
  }
}

void write_csv(const GridFunction& u, std::ostream& out) {
  const Grid& g = u.grid();
  out << "node,x,y,value\n";
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) {
      const Vec2 x = g.node(i, j);
      out << g.node_index(i, j) << ',' << format_double(x.x) << ',' << format_double(x.y) << ','
          << format_double(u.at(i, j)) << '\n';
    }
}

}  // namespace polarfk
