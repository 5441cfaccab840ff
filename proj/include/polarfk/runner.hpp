#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "polarfk/config.hpp"

namespace polarfk {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,          // parse, validation and other input errors
  kExitAssumption = 2,      // AssumptionViolated, NotAdmissible, SymmetryHypothesisViolated
  kExitNonConvergence = 3,  // outputs written, some solve did not converge
  kExitIo = 4,
};

struct RunOverrides {
  std::optional<std::string> out_dir;
  std::optional<double> p;
  std::optional<int> grid_n;
};

/// Throws ValidationError when an override is invalid.
ScenarioConfig apply_overrides(ScenarioConfig c, const RunOverrides& o);

/// Runs the scenario into c.output_dir: result.csv and verdict.json always,
/// eigenfunction.pgm for single-domain kinds, sweep.svg for sweeps with two
/// or more points, extra CSVs for the annulus study, and a run.log sidecar
/// that is the only file carrying timestamps. Errors go to `err`, one line
/// each.
int run(const ScenarioConfig& c, std::ostream& err);

}  // namespace polarfk
