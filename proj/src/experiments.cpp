#include "polarfk/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "polarfk/errors.hpp"
#include "polarfk/mesh.hpp"

namespace polarfk {

namespace {

std::string num(double v) { return format_double(v); }

SweepPoint solve_point(const PuncturedDomain& d, double param, const SolverConfig& cfg) {
  const TriMesh m = triangulate(d);
  const EigenResult r = solve(m, cfg);
  return {param, r.lambda, r.converged, r.outer_iters, r.residual};
}

// Some raster when the obstacle fits the grid, none otherwise.
std::optional<RasterSet> try_rasterize(const ShapeSpec& shape, const Grid& grid) {
  try {
    return rasterize(shape, grid, true);
  } catch (const OutOfBounds&) {
    return std::nullopt;
  }
}

std::optional<PuncturedDomain> try_domain(RasterSet outer, std::vector<Obstacle> obstacles,
                                          Boundary bc_outer, Boundary bc_inner, bool pure_neumann,
                                          std::string* why) {
  try {
    return PuncturedDomain(std::move(outer), std::move(obstacles), bc_outer, bc_inner, pure_neumann);
  } catch (const MalformedDomain& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
}

bool symmetric_or_false(const Polarizer& h, const RasterSet& a) {
  try {
    return is_reflection_symmetric(h, a);
  } catch (const OutOfBounds&) {
    return false;
  }
}

RasterSet neumann_obstacles(const PuncturedDomain& d) {
  RasterSet out(d.grid());
  for (std::size_t k = 0; k < d.obstacles().size(); ++k)
    if (d.obstacle_bc(k) == Boundary::Neumann) out = out | d.obstacles()[k].cells;
  return out;
}

bool has_neumann_obstacle(const PuncturedDomain& d) {
  for (std::size_t k = 0; k < d.obstacles().size(); ++k)
    if (d.obstacle_bc(k) == Boundary::Neumann) return true;
  return false;
}

// Every line of cells in direction (di, dj) meets `a` in at most one run.
bool convex_along(const RasterSet& a, int di, int dj) {
  const Grid& g = a.grid();
  const auto inside = [&](int i, int j) { return i >= 0 && j >= 0 && i < g.nx() && j < g.ny(); };
  for (int j0 = 0; j0 < g.ny(); ++j0)
    for (int i0 = 0; i0 < g.nx(); ++i0) {
      if (inside(i0 - di, j0 - dj)) continue;
      int runs = 0;
      bool prev = false;
      for (int i = i0, j = j0; inside(i, j); i += di, j += dj) {
        const bool cur = a.contains(i, j);
        if (cur && !prev) ++runs;
        prev = cur;
      }
      if (runs > 1) return false;
    }
  return true;
}

std::optional<std::pair<int, int>> cell_shift(Vec2 v, double spacing) {
  const double fx = v.x / spacing, fy = v.y / spacing;
  const double rx = std::round(fx), ry = std::round(fy);
  if (std::abs(fx - rx) > 1e-9 || std::abs(fy - ry) > 1e-9) return std::nullopt;
  return std::pair<int, int>{static_cast<int>(rx), static_cast<int>(ry)};
}

}  // namespace

PuncturedDomain build_domain(const DomainSpec& spec, const Grid& grid) {
  std::vector<Obstacle> obstacles;
  for (const auto& o : spec.obstacles) obstacles.push_back({rasterize(o.shape, grid, true), o.bc});
  return PuncturedDomain(rasterize(spec.outer, grid, false), std::move(obstacles), spec.bc_outer,
                         spec.bc_inner, spec.allow_pure_neumann);
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Increasing: return "increasing";
    case Direction::Decreasing: return "decreasing";
    case Direction::Constant: return "constant";
    case Direction::Mixed: return "mixed";
  }
  return "mixed";
}

const char* to_string(Relation r) { return r == Relation::Leq ? "leq" : "violated"; }

const char* to_string(StrictCase c) {
  switch (c) {
    case StrictCase::Invariant: return "invariant";
    case StrictCase::Reflected: return "reflected";
    case StrictCase::Strict: return "strict";
  }
  return "strict";
}

bool SweepResult::all_converged() const {
  return std::all_of(points.begin(), points.end(), [](const SweepPoint& p) { return p.converged; });
}

double strict_threshold(const SolverConfig& cfg) { return std::max(1e-4, 3.0 * cfg.outer_tol); }

void classify(SweepResult& sweep, const SolverConfig& cfg) {
  std::vector<const SweepPoint*> ok;
  for (const auto& p : sweep.points) {
    if (p.converged) ok.push_back(&p);
    else sweep.notes.push_back(sweep.param_name + "=" + num(p.param) + " did not converge; excluded");
  }
  sweep.direction = Direction::Mixed;
  sweep.min_margin = 0.0;
  if (ok.size() < 2) {
    sweep.notes.push_back("fewer than two converged points; no verdict");
    return;
  }
  const double eps = strict_threshold(cfg);
  bool up = true, down = true;
  double margin = INFINITY, lo = INFINITY, hi = -INFINITY, scale = 0.0;
  for (std::size_t k = 0; k < ok.size(); ++k) {
    lo = std::min(lo, ok[k]->lambda);
    hi = std::max(hi, ok[k]->lambda);
    scale = std::max(scale, std::abs(ok[k]->lambda));
    if (k == 0) continue;
    const double ref = std::max(std::abs(ok[k - 1]->lambda), 1e-300);
    const double rel = (ok[k]->lambda - ok[k - 1]->lambda) / ref;
    margin = std::min(margin, std::abs(rel));
    if (!(rel > eps)) up = false;
    if (!(rel < -eps)) down = false;
  }
  sweep.min_margin = margin;
  if (up) sweep.direction = Direction::Increasing;
  else if (down) sweep.direction = Direction::Decreasing;
  else if (scale == 0.0 || (hi - lo) / scale <= 1e-3) sweep.direction = Direction::Constant;
}

FkVerdict fk_check(const PuncturedDomain& d, const Polarizer& h, const SolverConfig& cfg,
                   std::optional<GridFunction>* eigenfunction) {
  if (has_neumann_obstacle(d) && !symmetric_or_false(h, d.obstacle_union()))
    throw SymmetryHypothesisViolated("Neumann obstacles are not symmetric under the reflection");
  if (d.bc_outer() == Boundary::Neumann && !symmetric_or_false(h, d.outer()))
    throw SymmetryHypothesisViolated("Neumann outer set is not symmetric under the reflection");
  const PuncturedDomain pd = polarize_punctured(h, d);

  FkVerdict v;
  const WitnessSets w = witness_sets(h, d.free_cells());
  if (w.a_h.empty()) v.strict_case = StrictCase::Invariant;
  else if (w.b_h.empty()) v.strict_case = StrictCase::Reflected;
  else v.strict_case = StrictCase::Strict;

  const TriMesh m0 = triangulate(d);
  const EigenResult r0 = solve(m0, cfg);
  const EigenResult r1 = solve(triangulate(pd), cfg);
  v.lambda_before = r0.lambda;
  v.lambda_after = r1.lambda;
  v.gap = r0.lambda - r1.lambda;
  v.tolerance = 1e-3 * r0.lambda;
  v.relation = r1.lambda <= r0.lambda + v.tolerance ? Relation::Leq : Relation::Violated;
  v.converged = r0.converged && r1.converged;
  v.before = {0.0, r0.lambda, r0.converged, r0.outer_iters, r0.residual};
  v.after = {1.0, r1.lambda, r1.converged, r1.outer_iters, r1.residual};
  if (eigenfunction) eigenfunction->emplace(r0.u);
  return v;
}

SweepResult translate_sweep(const TranslateScenario& sc, const SolverConfig& cfg) {
  cfg.validate();
  const Grid& g = sc.grid;
  const double n = norm(sc.direction);
  if (!(n > 0.0)) throw InvalidConfig("translation direction is zero");
  const Vec2 h = (1.0 / n) * sc.direction;
  auto axis = axis_from_normal(h);
  if (!axis) axis = axis_from_normal(-h);
  if (!axis) throw InvalidConfig("translation direction must be axis aligned or diagonal");
  for (std::size_t k = 1; k < sc.s_values.size(); ++k)
    if (sc.s_values[k] < sc.s_values[k - 1]) throw InvalidConfig("s values must be nondecreasing");

  const RasterSet omega = rasterize(sc.domain, g, false);
  const RasterSet obstacle = rasterize(sc.obstacle, g, true);
  const Polarizer h0(h, 0.0);
  if (!is_polarization_invariant(h0, omega))
    throw AssumptionViolated("domain is not invariant under polarization by {x.h < 0}");
  if (!is_steiner_symmetric(obstacle, *axis, 0.0).symmetric)
    throw AssumptionViolated("obstacle is not Steiner symmetric about {x.h = 0}");

  SweepResult out;
  out.param_name = "s";
  if (sc.bc_outer != Boundary::Dirichlet || sc.bc_obstacle != Boundary::Dirichlet)
    out.notes.push_back("mixed boundary data: exploratory run outside the all-Dirichlet setting");

  std::optional<double> s0;
  for (const double s : sc.s_values) {
    const auto shift = cell_shift(s * h, g.spacing());
    if (!shift) throw InvalidConfig("s = " + num(s) + " does not move the obstacle by whole cells");
    if (!is_polarization_invariant(Polarizer(h, s), omega)) {
      out.notes.push_back("s=" + num(s) + " dropped: domain not invariant under {x.h < s}");
      continue;
    }
    RasterSet moved(g);
    try {
      moved = obstacle.shifted(shift->first, shift->second);
    } catch (const OutOfBounds&) {
      out.notes.push_back("s=" + num(s) + " dropped: obstacle leaves the grid");
      continue;
    }
    std::string why;
    const auto d = try_domain(omega, {Obstacle{moved, sc.bc_obstacle}}, sc.bc_outer, sc.bc_obstacle,
                              false, &why);
    if (!d) {
      out.notes.push_back("s=" + num(s) + " dropped: " + why);
      continue;
    }
    if (!s0) {
      s0 = s;
      // Convexity of Sigma u sH(Sigma) along h, Sigma = domain beyond {x.h = s0}.
      const Polarizer hs(h, s);
      RasterSet sigma = omega;
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
          if (dot(g.cell_center(i, j), h) <= s) sigma.set(i, j, false);
      try {
        const RasterSet u = sigma | reflect_set(hs, sigma);
        const int di = (h.x > 1e-9) - (h.x < -1e-9), dj = (h.y > 1e-9) - (h.y < -1e-9);
        if (!convex_along(u, di, dj))
          out.notes.push_back("raster of the cap and its mirror at s0=" + num(s) +
                              " is not convex along h");
      } catch (const OutOfBounds&) {
        out.notes.push_back("convexity along h not checked: mirror of the cap leaves the grid");
      }
    }
    out.points.push_back(solve_point(*d, s, cfg));
  }
  classify(out, cfg);
  return out;
}

RotateReport rotate_sweep(const RotateScenario& sc, const SolverConfig& cfg) {
  cfg.validate();
  const Grid& g = sc.grid;
  if (std::abs(norm(sc.eta) - 1.0) > 1e-12) throw InvalidConfig("eta must be a unit vector");
  for (std::size_t k = 0; k < sc.s_values.size(); ++k) {
    const double s = sc.s_values[k];
    if (!(s >= -1.0 && s <= 1.0)) throw InvalidConfig("s values must lie in [-1, 1]");
    if (k > 0 && s < sc.s_values[k - 1]) throw InvalidConfig("s values must be nondecreasing");
  }
  if (sc.bc_obstacle != Boundary::Dirichlet)
    throw AssumptionViolated("the moving obstacle must carry Dirichlet data");

  const PuncturedDomain fixed = build_domain(sc.domain, g);
  const auto centred_disk = [&](const ShapeSpec& s) {
    const auto* disk = std::get_if<Disk>(&s.kind);
    return disk && norm(disk->center - sc.center) <= 1e-12;
  };
  if (fixed.bc_outer() == Boundary::Dirichlet) {
    int neumann = 0;
    for (std::size_t k = 0; k < fixed.obstacles().size(); ++k) {
      if (fixed.obstacle_bc(k) != Boundary::Neumann) continue;
      ++neumann;
      if (!centred_disk(sc.domain.obstacles[k].shape))
        throw AssumptionViolated("a Neumann obstacle must be a disk centred at the rotation centre");
    }
    if (neumann > 1) throw AssumptionViolated("at most one Neumann obstacle is allowed");
  } else {
    if (!centred_disk(sc.domain.outer))
      throw AssumptionViolated("a Neumann outer boundary must be a circle about the rotation centre");
    if (has_neumann_obstacle(fixed))
      throw AssumptionViolated("obstacles must carry Dirichlet data when the outer boundary is Neumann");
  }

  const auto pool = default_pool(g, sc.center, sc.eta, sc.pool_size);
  if (pool.empty()) throw AssumptionViolated("no grid-compatible polarizer through the centre");
  const RasterSet free = fixed.free_cells();
  if (!is_foliated_schwarz(free, sc.center, sc.eta, pool))
    throw AssumptionViolated("domain is not foliated Schwarz symmetric about the ray");
  const auto base = try_rasterize(sc.obstacle, g);
  if (!base) throw AssumptionViolated("obstacle does not fit the grid");
  if (!is_foliated_schwarz(*base, sc.center, sc.eta, pool))
    throw AssumptionViolated("obstacle is not foliated Schwarz symmetric about the ray");

  RotateReport rep;
  rep.radial = true;
  const double r = M_SQRT1_2;
  for (const Vec2 n : {Vec2{1, 0}, Vec2{0, 1}, Vec2{r, r}, Vec2{r, -r}}) {
    const Polarizer hn(n, dot(sc.center, n));
    if (!hn.grid_compatible(g) || !symmetric_or_false(hn, free)) rep.radial = false;
  }
  rep.expected = rep.radial ? Direction::Constant : Direction::Increasing;

  SweepResult& out = rep.sweep;
  out.param_name = "s";
  for (const double s : sc.s_values) {
    const double angle = std::acos(s);
    const ShapeSpec moved = rotated_by_angle(sc.obstacle, sc.center, sc.clockwise ? -angle : angle);
    const auto cells = try_rasterize(moved, g);
    if (!cells) {
      out.notes.push_back("s=" + num(s) + " dropped: obstacle leaves the grid");
      continue;
    }
    std::vector<Obstacle> obstacles = fixed.obstacles();
    obstacles.push_back({*cells, sc.bc_obstacle});
    std::string why;
    const auto d = try_domain(fixed.outer(), std::move(obstacles), fixed.bc_outer(),
                              fixed.bc_inner(), false, &why);
    if (!d) {
      out.notes.push_back("s=" + num(s) + " dropped: " + why);
      continue;
    }
    out.points.push_back(solve_point(*d, s, cfg));
  }
  classify(out, cfg);
  return rep;
}

AnnulusReport annulus_study(const AnnulusParams& prm, const Grid& g, const SolverConfig& cfg) {
  cfg.validate();
  if (!(prm.r > 0.0 && prm.r < prm.R)) throw InvalidConfig("need 0 < r < R");
  if (!(prm.alpha >= 0.0 && prm.alpha < prm.R - prm.r)) throw InvalidConfig("need 0 <= alpha < R - r");
  if (!(prm.rho > 0.0)) throw InvalidConfig("need rho > 0");
  const auto origin_node = cell_shift(-1.0 * g.origin(), g.spacing());
  if (!origin_node) throw InvalidConfig("the grid must have a node at the origin");

  const RasterSet outer = rasterize(Disk{{0.0, 0.0}, prm.R}, g, false);
  const RasterSet hole = rasterize(Disk{{-prm.alpha, 0.0}, prm.r}, g, true);
  const auto domain_at = [&](Vec2 y) -> std::optional<PuncturedDomain> {
    const auto cells = try_rasterize(Disk{y, prm.rho}, g);
    if (!cells) return std::nullopt;
    return try_domain(outer, {Obstacle{hole, std::nullopt}, Obstacle{*cells, std::nullopt}},
                      Boundary::Dirichlet, Boundary::Dirichlet, false, nullptr);
  };

  AnnulusReport rep;
  rep.r_bar = 0.5 * (prm.R + prm.r - prm.alpha);
  const double step = 2.0 * g.spacing();

  rep.line.param_name = "s";
  for (int k = 0; k * step < prm.R; ++k) {
    const double s = k * step;
    if (const auto d = domain_at({s, 0.0})) rep.line.points.push_back(solve_point(*d, s, cfg));
  }
  if (rep.line.points.empty())
    throw EmptyAdmissibleSet("no admissible obstacle position on [0, R) x {0}");
  classify(rep.line, cfg);

  // Segment [-alpha, 0]; lift it off the axis when the axis is blocked.
  std::vector<double> seg;
  for (int k = 0; -k * step >= -prm.alpha - 1e-12; ++k) seg.insert(seg.begin(), -k * step);
  rep.segment.param_name = "s";
  if (seg.size() >= 2) {
    std::optional<double> z;
    for (int k = 0; k * g.spacing() < prm.R && !z; ++k) {
      const double zk = k * g.spacing();
      if (std::all_of(seg.begin(), seg.end(), [&](double s) { return domain_at({s, zk}).has_value(); }))
        z = zk;
    }
    if (z) {
      rep.segment_z = *z;
      rep.segment_on_axis = *z == 0.0;
      if (!rep.segment_on_axis)
        rep.notes.push_back("segment [-alpha, 0] blocked on the axis; sampled at z=" + num(*z));
      for (const double s : seg) rep.segment.points.push_back(solve_point(*domain_at({s, *z}), s, cfg));
      classify(rep.segment, cfg);
    } else {
      rep.notes.push_back("no height at which the whole segment [-alpha, 0] is admissible");
    }
  } else {
    rep.notes.push_back("segment [-alpha, 0] has fewer than two samples");
  }

  std::vector<double> centres{0.0};
  if (prm.alpha > 0.0) centres.push_back(-prm.alpha);
  for (const double t : centres) {
    const double lo = prm.r + prm.rho + std::abs(t + prm.alpha);
    const double hi = prm.R - prm.rho - std::abs(t);
    if (!(lo < hi)) {
      rep.notes.push_back("no circle about t=" + num(t) + " fits the domain");
      continue;
    }
    CircleSweep c{t, 0.5 * (lo + hi), {}};
    c.sweep.param_name = "s";
    for (int k = 0; k <= 8; ++k) {
      const double theta = M_PI - k * M_PI / 8.0;
      const Vec2 y{t + c.beta * std::cos(theta), c.beta * std::sin(theta)};
      if (const auto d = domain_at(y)) c.sweep.points.push_back(solve_point(*d, y.x, cfg));
      else c.sweep.notes.push_back("angle " + num(theta) + " dropped: not admissible");
    }
    classify(c.sweep, cfg);
    rep.circles.push_back(std::move(c));
  }

  // Argmax and unimodality of the line sweep over converged points.
  std::vector<const SweepPoint*> ok;
  for (const auto& p : rep.line.points)
    if (p.converged) ok.push_back(&p);
  if (!ok.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < ok.size(); ++k)
      if (ok[k]->lambda > ok[best]->lambda) best = k;
    rep.argmax_s = ok[best]->param;
    rep.argmax_lambda = ok[best]->lambda;
    std::vector<int> signs;
    for (std::size_t k = 1; k < ok.size(); ++k) {
      const double rel = (ok[k]->lambda - ok[k - 1]->lambda) / std::abs(ok[k - 1]->lambda);
      if (std::abs(rel) > 1e-4) signs.push_back(rel > 0 ? 1 : -1);
    }
    int maxima = 0;
    if (!signs.empty() && signs.front() < 0) ++maxima;
    for (std::size_t k = 1; k < signs.size(); ++k)
      if (signs[k - 1] > 0 && signs[k] < 0) ++maxima;
    if (!signs.empty() && signs.back() > 0) ++maxima;
    if (signs.empty()) maxima = 1;
    rep.local_maxima = maxima;
    rep.unimodal = maxima == 1;
    rep.argmax_interior = best > 0 && best + 1 < ok.size() && rep.argmax_s > 0.0 &&
                          rep.argmax_s < rep.r_bar;
  }
  return rep;
}

SymmetryReport symmetry_check(const PuncturedDomain& d, Vec2 center, Vec2 eta,
                              const SolverConfig& cfg, std::size_t pool_size,
                              std::optional<GridFunction>* eigenfunction) {
  SymmetryReport rep;
  rep.pool = default_pool(d.grid(), center, eta, pool_size);
  if (rep.pool.empty()) throw AssumptionViolated("no grid-compatible polarizer through the centre");
  if (!is_foliated_schwarz(d.free_cells(), center, eta, rep.pool))
    throw AssumptionViolated("domain is not foliated Schwarz symmetric about the ray");
  const RasterSet neumann = neumann_obstacles(d);
  for (const auto& h : rep.pool) {
    if (!neumann.empty() && !symmetric_or_false(h, neumann))
      throw AssumptionViolated("Neumann obstacles are not symmetric for every pool polarizer");
    if (d.bc_outer() == Boundary::Neumann && !symmetric_or_false(h, d.outer()))
      throw AssumptionViolated("Neumann outer set is not symmetric for every pool polarizer");
  }

  const TriMesh m = triangulate(d);
  const EigenResult r = solve(m, cfg);
  rep.lambda = r.lambda;
  rep.converged = r.converged;
  rep.outer_iters = r.outer_iters;
  rep.residual = r.residual;
  const auto& u = r.u.values();
  const double top = *std::max_element(u.begin(), u.end());
  for (const auto& h : rep.pool) {
    const GridFunction pu = polarize_function(h, r.u);
    double worst = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) worst = std::max(worst, std::abs(pu.values()[n] - u[n]));
    rep.defects.push_back(worst / top);
    rep.max_defect = std::max(rep.max_defect, worst / top);
  }
  if (eigenfunction) eigenfunction->emplace(r.u);
  return rep;
}

}  // namespace polarfk
