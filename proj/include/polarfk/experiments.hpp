#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polarfk/domain.hpp"
#include "polarfk/eigensolve.hpp"
#include "polarfk/shapes.hpp"

namespace polarfk {

struct ObstacleSpec {
  ShapeSpec shape;
  std::optional<Boundary> bc;
  friend bool operator==(const ObstacleSpec&, const ObstacleSpec&) = default;
};

struct DomainSpec {
  ShapeSpec outer;
  Boundary bc_outer = Boundary::Dirichlet;
  Boundary bc_inner = Boundary::Dirichlet;
  std::vector<ObstacleSpec> obstacles;
  bool allow_pure_neumann = false;
  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

/// Outer shape rasterized open, obstacles closed.
PuncturedDomain build_domain(const DomainSpec& spec, const Grid& grid);

enum class Direction { Increasing, Decreasing, Constant, Mixed };
const char* to_string(Direction d);

struct SweepPoint {
  double param = 0.0;
  double lambda = 0.0;
  bool converged = false;
  int outer_iters = 0;
  double residual = 0.0;
};

struct SweepResult {
  std::string param_name = "s";
  std::vector<SweepPoint> points;
  Direction direction = Direction::Mixed;
  double min_margin = 0.0;  // smallest consecutive |dlambda| / lambda
  std::vector<std::string> notes;

  bool all_converged() const;
};

/// Strictness floor for sweep verdicts.
double strict_threshold(const SolverConfig& cfg);

/// Fills direction, min_margin and notes from the converged points only.
/// Consecutive relative differences above strict_threshold(cfg) in one
/// direction make a strict verdict; a relative spread of at most 1e-3 makes
/// it constant.
void classify(SweepResult& sweep, const SolverConfig& cfg);

enum class Relation { Leq, Violated };
enum class StrictCase { Invariant, Reflected, Strict };
const char* to_string(Relation r);
const char* to_string(StrictCase c);

struct FkVerdict {
  double lambda_before = 0.0;
  double lambda_after = 0.0;
  Relation relation = Relation::Leq;
  StrictCase strict_case = StrictCase::Strict;
  double gap = 0.0;        // lambda_before - lambda_after
  double tolerance = 0.0;  // 1e-3 lambda_before
  bool converged = false;
  SweepPoint before;       // param 0
  SweepPoint after;        // param 1
};

/// Solves on D and on P_H(D). Throws NotAdmissible, and
/// SymmetryHypothesisViolated when a Neumann family is not sH-symmetric.
FkVerdict fk_check(const PuncturedDomain& d, const Polarizer& h, const SolverConfig& cfg,
                   std::optional<GridFunction>* eigenfunction = nullptr);

struct TranslateScenario {
  Grid grid;
  ShapeSpec domain;
  ShapeSpec obstacle;
  Vec2 direction{1.0, 0.0};
  std::vector<double> s_values;
  Boundary bc_outer = Boundary::Dirichlet;
  Boundary bc_obstacle = Boundary::Dirichlet;
};

/// First eigenvalue of domain \ (s h + obstacle) along s. Throws
/// AssumptionViolated when the domain is not P_{H_0} invariant or the
/// obstacle is not Steiner symmetric about x.h = 0. Positions outside the
/// admissible set are dropped with a note.
SweepResult translate_sweep(const TranslateScenario& sc, const SolverConfig& cfg);

struct RotateScenario {
  Grid grid;
  DomainSpec domain;  // the fixed part
  ShapeSpec obstacle;
  Boundary bc_obstacle = Boundary::Dirichlet;
  Vec2 center;
  Vec2 eta{1.0, 0.0};
  std::vector<double> s_values;
  bool clockwise = false;
  std::size_t pool_size = 8;
};

struct RotateReport {
  SweepResult sweep;
  bool radial = false;   // domain radial about the center
  Direction expected = Direction::Increasing;
};

/// Eigenvalue as the obstacle turns about `center` by arccos(s). The fixed
/// domain must be an outer set with Dirichlet data and at most one Neumann
/// disk centred at `center`, or a Neumann disk centred at `center` with
/// Dirichlet obstacles; domain and obstacle must pass the foliated Schwarz
/// check over the default pool. Throws AssumptionViolated otherwise.
RotateReport rotate_sweep(const RotateScenario& sc, const SolverConfig& cfg);

struct AnnulusParams {
  double R = 1.0;
  double r = 0.2;
  double alpha = 0.25;
  double rho = 0.1;
  friend bool operator==(const AnnulusParams&, const AnnulusParams&) = default;
};

struct CircleSweep {
  double t = 0.0;     // centre t e1
  double beta = 0.0;  // radius
  SweepResult sweep;  // param = first coordinate of the obstacle centre
};

struct AnnulusReport {
  SweepResult line;          // s on the admissible part of [0, R), z = 0
  SweepResult segment;       // s on [-alpha, 0] at height segment_z
  double segment_z = 0.0;
  bool segment_on_axis = false;
  std::vector<CircleSweep> circles;
  double r_bar = 0.0;        // (R + r - alpha) / 2
  double argmax_s = 0.0;
  double argmax_lambda = 0.0;
  int local_maxima = 0;
  bool unimodal = false;
  bool argmax_interior = false;  // argmax in (0, r_bar)
  std::vector<std::string> notes;
};

/// Dirichlet problem on B_R(0) \ (closed B_r(-alpha e1) u closed B_rho(y)).
/// The grid must have a node at the origin. Throws EmptyAdmissibleSet when no
/// obstacle position on [0, R) x {0} is admissible.
AnnulusReport annulus_study(const AnnulusParams& prm, const Grid& grid, const SolverConfig& cfg);

struct SymmetryReport {
  double lambda = 0.0;
  bool converged = false;
  int outer_iters = 0;
  double residual = 0.0;
  double max_defect = 0.0;               // max over the pool of sup|P_H u - u| / sup u
  std::vector<double> defects;           // per pool member
  std::vector<Polarizer> pool;
};

/// Throws AssumptionViolated unless the free region passes the foliated
/// Schwarz check and every Neumann family is symmetric for each pool member.
SymmetryReport symmetry_check(const PuncturedDomain& d, Vec2 center, Vec2 eta,
                              const SolverConfig& cfg, std::size_t pool_size = 8,
                              std::optional<GridFunction>* eigenfunction = nullptr);

}  // namespace polarfk
