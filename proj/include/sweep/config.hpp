#pragma once

#include <optional>
#include <string>

#include "sweep/fields.hpp"
#include "sweep/grid.hpp"
#include "sweep/scenario.hpp"

namespace sweep {

/// Selection source for plain solves: zero, a constant vector, or a CSV file
/// with columns t, z_0..z_{d-1}.
struct SelectionSpec {
    std::string kind = "zero";  // "zero" | "constant" | "file"
    Vec constant;
    std::string path;
};

/// A fully resolved run configuration (scenario reference expanded).
struct RunConfig {
    std::string scenario;   // informational; empty for inline problems
    ordered_json problem;   // resolved problem block
    double h = 0.0;         // one of h/steps is set
    std::size_t steps = 0;
    double tol = 1e-6;
    std::size_t max_iter = 50;
    SelectionSpec selection;
};

/// Parse a config document. Accepts either {"scenario": name, ...overrides}
/// or an inline {"problem": {...}} block; explicit grid/iteration settings
/// override the scenario defaults. Throws ConfigError on malformed input.
RunConfig parse_config(const ordered_json& doc);

/// Canonical JSON form; parse_config(dump_config(c)) reproduces c exactly.
ordered_json dump_config(const RunConfig& cfg);

/// Build the problem instance from a resolved problem block.
ProblemSpec build_problem(const ordered_json& problem);

/// Solver grid for the configured interval.
TimeGrid build_grid(const RunConfig& cfg, const ProblemSpec& spec);

/// Materialize the configured selection on a grid.
GridFunction build_selection(const SelectionSpec& sel, const TimeGrid& grid, std::size_t dim);

}  // namespace sweep
