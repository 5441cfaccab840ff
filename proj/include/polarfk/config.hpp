#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polarfk/eigensolve.hpp"
#include "polarfk/experiments.hpp"

namespace polarfk {

enum class ScenarioKind { Solve, FkCheck, TranslateSweep, RotateSweep, AnnulusStudy, SymmetryCheck };

const char* to_string(ScenarioKind k);
std::optional<ScenarioKind> kind_from_string(const std::string& s);

struct GridSpec {
  Vec2 origin;
  double spacing = 0.0;
  int nx = 0;
  int ny = 0;

  Grid to_grid() const;  // throws InvalidConfig
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct PolarizerSpec {
  Vec2 normal;
  double offset = 0.0;
  friend bool operator==(const PolarizerSpec&, const PolarizerSpec&) = default;
};

// The outer shape and its label come from ScenarioConfig::domain.
struct TranslateSpec {
  ShapeSpec obstacle;
  Vec2 direction{1.0, 0.0};
  std::vector<double> s_values;
  Boundary bc_obstacle = Boundary::Dirichlet;
  friend bool operator==(const TranslateSpec&, const TranslateSpec&) = default;
};

struct RotateSpec {
  ShapeSpec obstacle;
  Vec2 center;
  Vec2 eta{1.0, 0.0};
  std::vector<double> s_values;
  bool clockwise = false;
  std::size_t pool_size = 8;
  friend bool operator==(const RotateSpec&, const RotateSpec&) = default;
};

struct SymmetrySpec {
  Vec2 center;
  Vec2 eta{1.0, 0.0};
  std::size_t pool_size = 8;
  friend bool operator==(const SymmetrySpec&, const SymmetrySpec&) = default;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Solve;
  GridSpec grid;
  std::optional<DomainSpec> domain;
  std::optional<PolarizerSpec> polarizer;
  std::optional<TranslateSpec> translate;
  std::optional<RotateSpec> rotate;
  std::optional<AnnulusParams> annulus;
  std::optional<SymmetrySpec> symmetry;
  SolverConfig solver;
  std::string output_dir = "out";

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// JSON text to config. Throws ParseError (with line and column) on malformed
/// JSON and ValidationError naming the offending field otherwise. Unknown
/// keys and sections the kind does not use are rejected.
ScenarioConfig parse_config(const std::string& text);

/// Canonical JSON form; parse_config(emit_config(c)) == c.
std::string emit_config(const ScenarioConfig& c);

ScenarioConfig load_config(const std::string& path);  // IoError on read failure

/// Grid with spacing 1/n covering the same box, nodes on multiples of 1/n.
GridSpec regrid(const GridSpec& g, int n);

}  // namespace polarfk
