#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "polarfk/experiments.hpp"

namespace polarfk {

/// Header `param,lambda,converged,outer_iters,residual`, one row per point.
void write_sweep_csv(const std::vector<SweepPoint>& points, std::ostream& out);

/// One polyline through the points in order, filled markers for converged
/// points and hollow ones otherwise. Throws ValidationError with fewer than
/// two points.
void write_svg(const SweepResult& sweep, std::ostream& out);

/// write_svg to a file; IoError when the file cannot be written.
void emit_plot(const SweepResult& sweep, const std::string& path);

/// Writes `content` verbatim; IoError on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace polarfk
