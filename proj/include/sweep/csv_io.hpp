#pragma once

#include <iosfwd>
#include <string>

#include "sweep/stepper.hpp"

namespace sweep {

/// Trajectory export: header t, x_0..x_{d-1}, z_0..z_{d-1}, dist_C,
/// volterra_norm; one row per node, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Reads a selection from a CSV whose first column is t and next dim columns
/// are z; the rows must match the grid nodes (tolerance 1e-9 on times).
GridFunction read_selection_csv(const std::string& path, const TimeGrid& grid, std::size_t dim);

}  // namespace sweep
