#include "polarfk/mesh.hpp"

#include <cmath>
#include <ostream>

#include "polarfk/errors.hpp"

namespace polarfk {

namespace {

// Complement of the free region on a grid padded by one cell on every side,
// split into 4-connected components. Component 0 is the unbounded one.
struct ComplementMap {
  int px = 0, py = 0;
  std::vector<int> label;      // per padded cell, -1 on free cells
  std::vector<Boundary> bc;    // per component

  int at(int i, int j) const { return label[(i + 1) + (j + 1) * px]; }
};

ComplementMap complement_map(const PuncturedDomain& d) {
  const Grid& g = d.grid();
  const RasterSet free = d.free_cells();
  ComplementMap cm;
  cm.px = g.nx() + 2;
  cm.py = g.ny() + 2;
  std::vector<std::uint8_t> comp(static_cast<std::size_t>(cm.px * cm.py), 1);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (free.contains(i, j)) comp[(i + 1) + (j + 1) * cm.px] = 0;
  const Grid padded({0.0, 0.0}, 1.0, cm.px, cm.py);
  Components c = connected_components(RasterSet(padded, comp));
  cm.label = std::move(c.labels);

  std::vector<int> owner(static_cast<std::size_t>(c.count), -1);
  std::vector<bool> mixed(static_cast<std::size_t>(c.count), false);
  for (std::size_t k = 0; k < d.obstacles().size(); ++k) {
    const RasterSet& cells = d.obstacles()[k].cells;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!cells.contains(i, j)) continue;
        const int l = cm.at(i, j);
        if (l == 0) throw MalformedDomain("an obstacle touches the outer boundary");
        if (owner[l] >= 0 && d.obstacle_bc(static_cast<std::size_t>(owner[l])) != d.obstacle_bc(k))
          mixed[l] = true;
        owner[l] = static_cast<int>(k);
      }
  }
  cm.bc.resize(static_cast<std::size_t>(c.count), d.bc_outer());
  for (int l = 1; l < c.count; ++l) {
    if (mixed[l]) throw MalformedDomain("one hole holds obstacles with different labels");
    if (owner[l] >= 0) cm.bc[l] = d.obstacle_bc(static_cast<std::size_t>(owner[l]));
  }
  return cm;
}

void local_gradients(Triangle& t, const std::array<Vec2, 3>& p) {
  const double area2 = (p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[1].y - p[0].y) * (p[2].x - p[0].x);
  for (int k = 0; k < 3; ++k) {
    const Vec2 e = p[(k + 2) % 3] - p[(k + 1) % 3];
    t.grad[k] = {-e.y / area2, e.x / area2};
  }
  t.area = 0.5 * area2;
}

void check_pinned(const TriMesh& m, const GridFunction& u) {
  if (!(u.grid() == m.grid())) throw InvalidShape("function lives on another grid");
  for (int n = 0; n < m.grid().node_count(); ++n)
    if (m.dirichlet(n) && std::abs(u[n]) > 1e-14)
      throw DirichletViolation("function is nonzero on a Dirichlet node");
}

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidConfig("p must exceed 1");
}

// Value of a free vector at a grid node (0 for pinned and inactive nodes).
inline double value_at(const TriMesh& m, const std::vector<double>& x, int node) {
  const int k = m.free_index(node);
  return k >= 0 ? x[k] : 0.0;
}

void check_size(const TriMesh& m, const std::vector<double>& x) {
  if (x.size() != m.free_count()) throw InvalidShape("free vector has the wrong length");
}

}  // namespace

BoundaryClassification classify_boundaries(const PuncturedDomain& d) {
  const ComplementMap cm = complement_map(d);
  const Grid& g = d.grid();
  const RasterSet free = d.free_cells();
  int count = 0;
  for (int l : cm.label) count = std::max(count, l + 1);
  BoundaryClassification out;
  out.holes.resize(static_cast<std::size_t>(std::max(0, count - 1)));
  for (int l = 1; l < count; ++l) out.hole_bc.push_back(cm.bc[l]);
  const auto add = [&](int l, int a, int b) {
    BoundaryEdge e{a, b};
    if (l == 0) out.outer.push_back(e);
    else out.holes[static_cast<std::size_t>(l - 1)].push_back(e);
  };
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!free.contains(i, j)) continue;
      const int n00 = g.node_index(i, j), n10 = g.node_index(i + 1, j);
      const int n01 = g.node_index(i, j + 1), n11 = g.node_index(i + 1, j + 1);
      if (int l = cm.at(i, j - 1); l >= 0) add(l, n00, n10);
      if (int l = cm.at(i + 1, j); l >= 0) add(l, n10, n11);
      if (int l = cm.at(i, j + 1); l >= 0) add(l, n11, n01);
      if (int l = cm.at(i - 1, j); l >= 0) add(l, n01, n00);
    }
  return out;
}

TriMesh triangulate(const PuncturedDomain& d) {
  const Grid& g = d.grid();
  TriMesh m(g);
  m.free_cells_ = d.free_cells();
  m.weights_ = node_weights(m.free_cells_);
  const ComplementMap cm = complement_map(d);

  m.dirichlet_.assign(static_cast<std::size_t>(g.node_count()), 0);
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) {
      const int n = g.node_index(i, j);
      if (!(m.weights_[n] > 0.0)) continue;
      for (int dj = -1; dj <= 0; ++dj)
        for (int di = -1; di <= 0; ++di) {
          const int l = cm.at(i + di, j + dj);
          if (l >= 0 && cm.bc[l] == Boundary::Dirichlet) m.dirichlet_[n] = 1;
        }
    }

  m.free_index_.assign(static_cast<std::size_t>(g.node_count()), -1);
  for (int n = 0; n < g.node_count(); ++n)
    if (m.weights_[n] > 0.0 && !m.dirichlet_[n]) {
      m.free_index_[n] = static_cast<int>(m.free_nodes_.size());
      m.free_nodes_.push_back(n);
    }

  const double h = g.spacing();
  const std::array<Vec2, 4> corner{{{0, 0}, {h, 0}, {h, h}, {0, h}}};
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!m.free_cells_.contains(i, j)) continue;
      const std::array<int, 4> node{g.node_index(i, j), g.node_index(i + 1, j),
                                    g.node_index(i + 1, j + 1), g.node_index(i, j + 1)};
      for (const auto& tri : {std::array<int, 3>{0, 1, 2}, std::array<int, 3>{0, 2, 3}}) {
        Triangle t;
        for (int k = 0; k < 3; ++k) t.nodes[k] = node[tri[k]];
        local_gradients(t, {corner[tri[0]], corner[tri[1]], corner[tri[2]]});
        m.triangles_.push_back(t);
      }
    }
  return m;
}

std::size_t TriMesh::dirichlet_count() const {
  std::size_t c = 0;
  for (int n = 0; n < grid_.node_count(); ++n)
    if (active(n) && dirichlet_[n]) ++c;
  return c;
}

GridFunction TriMesh::expand(const std::vector<double>& x) const {
  check_size(*this, x);
  std::vector<double> values(static_cast<std::size_t>(grid_.node_count()), 0.0);
  for (std::size_t k = 0; k < free_nodes_.size(); ++k) values[free_nodes_[k]] = x[k];
  return GridFunction(grid_, std::move(values), free_cells_);
}

std::vector<double> TriMesh::restrict_to_free(const GridFunction& u) const {
  if (!(u.grid() == grid_)) throw InvalidShape("function lives on another grid");
  std::vector<double> x(free_nodes_.size());
  for (std::size_t k = 0; k < free_nodes_.size(); ++k) x[k] = u[free_nodes_[k]];
  return x;
}

double energy_p(const TriMesh& m, const std::vector<double>& x, double p) {
  check_p(p);
  check_size(m, x);
  double e = 0.0;
  for (const Triangle& t : m.triangles()) {
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) g = g + value_at(m, x, t.nodes[k]) * t.grad[k];
    const double g2 = dot(g, g);
    if (g2 > 0.0) e += t.area * (p == 2.0 ? g2 : std::pow(g2, 0.5 * p));
  }
  return e;
}

std::vector<double> grad_energy_p(const TriMesh& m, const std::vector<double>& x, double p) {
  check_p(p);
  check_size(m, x);
  std::vector<double> out(x.size(), 0.0);
  for (const Triangle& t : m.triangles()) {
    Vec2 g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) g = g + value_at(m, x, t.nodes[k]) * t.grad[k];
    const double g2 = dot(g, g);
    if (!(g2 > 0.0)) continue;
    const double c = t.area * p * (p == 2.0 ? 1.0 : std::pow(g2, 0.5 * p - 1.0));
    for (int k = 0; k < 3; ++k) {
      const int f = m.free_index(t.nodes[k]);
      if (f >= 0) out[f] += c * dot(g, t.grad[k]);
    }
  }
  return out;
}

double mass_p(const TriMesh& m, const std::vector<double>& x, double p) {
  check_p(p);
  check_size(m, x);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = std::abs(x[k]);
    if (a > 0.0) s += m.weights()[m.free_nodes()[k]] * (p == 2.0 ? a * a : std::pow(a, p));
  }
  return s;
}

std::vector<double> grad_mass_p(const TriMesh& m, const std::vector<double>& x, double p) {
  check_p(p);
  check_size(m, x);
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = std::abs(x[k]);
    if (a > 0.0)
      out[k] = p * m.weights()[m.free_nodes()[k]] * std::copysign(std::pow(a, p - 1.0), x[k]);
  }
  return out;
}

double energy_p(const TriMesh& m, const GridFunction& u, double p) {
  check_pinned(m, u);
  return energy_p(m, m.restrict_to_free(u), p);
}

std::vector<double> grad_energy_p(const TriMesh& m, const GridFunction& u, double p) {
  check_pinned(m, u);
  return grad_energy_p(m, m.restrict_to_free(u), p);
}

double mass_p(const TriMesh& m, const GridFunction& u, double p) {
  check_pinned(m, u);
  return mass_p(m, m.restrict_to_free(u), p);
}

std::vector<double> grad_mass_p(const TriMesh& m, const GridFunction& u, double p) {
  check_pinned(m, u);
  return grad_mass_p(m, m.restrict_to_free(u), p);
}

void write_mesh(const TriMesh& m, std::ostream& out) {
  const Grid& g = m.grid();
  for (int j = 0; j <= g.ny(); ++j)
    for (int i = 0; i <= g.nx(); ++i) {
      const int n = g.node_index(i, j);
      if (!m.active(n)) continue;
      const Vec2 x = g.node(i, j);
      out << "node " << n << ' ' << format_double(x.x) << ' ' << format_double(x.y) << ' '
          << (m.dirichlet(n) ? "dirichlet" : "free") << '\n';
    }
  for (const Triangle& t : m.triangles())
    out << "tri " << t.nodes[0] << ' ' << t.nodes[1] << ' ' << t.nodes[2] << '\n';
}

}  // namespace polarfk
