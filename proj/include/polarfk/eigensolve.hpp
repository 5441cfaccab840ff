#pragma once

#include <cstdint>

#include "polarfk/mesh.hpp"

namespace polarfk {

struct SolverConfig {
  double p = 2.0;
  double outer_tol = 1e-8;     // relative change of lambda between outer steps
  double inner_tol = 1e-9;     // sup norm of the inner gradient
  int max_outer = 200;
  int max_inner = 5000;
  double smoothing_eps = 1e-10;

  // Throws InvalidConfig.
  void validate() const;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct EigenResult {
  double lambda = 0.0;
  GridFunction u;              // u >= 0, mass_p(u) = 1, 0 on Dirichlet nodes
  int outer_iters = 0;
  double residual = 0.0;       // sup |grad E(u) - lambda grad M(u)| over free nodes
  bool converged = false;
};

/// E(u) / M(u). Throws ZeroFunction when M(u) = 0.
double rayleigh(const TriMesh& m, const GridFunction& u, double p);

/// p = 2: inverse power iteration K y = W x with preconditioned CG solves.
EigenResult solve_p2(const TriMesh& m, const SolverConfig& cfg = {});

/// Inverse iteration: each outer step minimises (1/p) E(v) - <w |u|^{p-2} u, v>
/// by damped Newton-CG, then renormalises |v|.
EigenResult solve_p(const TriMesh& m, const SolverConfig& cfg);

/// solve_p2 when cfg.p == 2, solve_p otherwise.
EigenResult solve(const TriMesh& m, const SolverConfig& cfg);

/// Largest |<grad E(u)/p - lambda grad M(u)/p, v>| over random trial vectors
/// v on the free nodes with unit lumped 2-norm.
double check_weak_form(const TriMesh& m, const EigenResult& r, double p, int trial_count,
                       std::uint64_t seed = 1);

}  // namespace polarfk
