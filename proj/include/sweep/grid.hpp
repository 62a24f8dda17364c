#pragma once

#include <cstddef>
#include <vector>

#include "sweep/errors.hpp"
#include "sweep/vec.hpp"

namespace sweep {

/// Strictly increasing time nodes on [t0, t_end].
struct TimeGrid {
    std::vector<double> nodes;

    /// Uniform grid with `steps` intervals; the last node is set to t_end
    /// exactly so accumulated rounding never shortens the interval.
    static TimeGrid uniform(double t0, double t_end, std::size_t steps);

    std::size_t node_count() const { return nodes.size(); }
    std::size_t step_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    double front() const { return nodes.front(); }
    double back() const { return nodes.back(); }
    double step(std::size_t k) const { return nodes[k + 1] - nodes[k]; }
    double max_step() const;

    bool same_nodes(const TimeGrid& other) const { return nodes == other.nodes; }

    /// Index of the last node <= t (clamped to valid range).
    std::size_t locate(double t) const;
};

/// Interpolation semantics of a grid-sampled vector function.
enum class SampleKind {
    State,       ///< piecewise-linear between nodes
    Selection,   ///< piecewise-constant, left node value on [t_k, t_{k+1})
    Derivative,  ///< piecewise-constant, right node value on (t_k, t_{k+1}]
};

/// Vector function sampled on a time grid.
struct GridFunction {
    TimeGrid grid;
    std::vector<Vec> values;
    SampleKind kind = SampleKind::State;

    static GridFunction zeros(const TimeGrid& g, std::size_t dim, SampleKind kind);
    static GridFunction constant(const TimeGrid& g, const Vec& value, SampleKind kind);

    std::size_t dim() const { return values.empty() ? 0 : values.front().size(); }

    /// Evaluate at time t per the declared interpolation kind.
    Vec at(double t) const;
};

/// Scalar function sampled on a time grid (bound evaluator output).
struct ScalarGrid {
    std::vector<double> t;
    std::vector<double> v;

    double front() const { return v.front(); }
    double back() const { return v.back(); }

    /// Linear interpolation, clamped at the ends.
    double at(double time) const;

    double max() const;
    double min() const;
};

/// Throws GridMismatch unless both functions share the same nodes.
void require_same_grid(const GridFunction& a, const GridFunction& b);

}  // namespace sweep
