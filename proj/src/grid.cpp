#include "sweep/grid.hpp"

#include <algorithm>
#include <cassert>

namespace sweep {

TimeGrid TimeGrid::uniform(double t0, double t_end, std::size_t steps) {
    if (!(t_end > t0)) throw ConfigError("TimeGrid: t_end must exceed t0");
    if (steps < 1) throw ConfigError("TimeGrid: at least one step required");
    TimeGrid g;
    g.nodes.resize(steps + 1);
    const double h = (t_end - t0) / static_cast<double>(steps);
    for (std::size_t k = 0; k <= steps; ++k) g.nodes[k] = t0 + static_cast<double>(k) * h;
    g.nodes[steps] = t_end;
    return g;
}

double TimeGrid::max_step() const {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) m = std::max(m, step(k));
    return m;
}

std::size_t TimeGrid::locate(double t) const {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    if (it == nodes.begin()) return 0;
    return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

GridFunction GridFunction::zeros(const TimeGrid& g, std::size_t dim, SampleKind kind) {
    GridFunction f;
    f.grid = g;
    f.values.assign(g.node_count(), Vec(dim, 0.0));
    f.kind = kind;
    return f;
}

GridFunction GridFunction::constant(const TimeGrid& g, const Vec& value, SampleKind kind) {
    GridFunction f;
    f.grid = g;
    f.values.assign(g.node_count(), value);
    f.kind = kind;
    return f;
}

Vec GridFunction::at(double t) const {
    assert(!values.empty());
    const auto& n = grid.nodes;
    if (t <= n.front()) return values.front();
    if (t >= n.back()) return values.back();
    const std::size_t k = grid.locate(t);  // n[k] <= t < n[k+1]
    switch (kind) {
        case SampleKind::Selection:
            return values[k];
        case SampleKind::Derivative:
            // value attached to the right node, constant on (t_k, t_{k+1}]
            return t == n[k] ? values[k] : values[k + 1];
        case SampleKind::State:
        default: {
            const double w = (t - n[k]) / (n[k + 1] - n[k]);
            Vec out = values[k];
            out *= 1.0 - w;
            axpy(out, w, values[k + 1]);
            return out;
        }
    }
}

double ScalarGrid::at(double time) const {
    assert(t.size() == v.size() && !t.empty());
    if (time <= t.front()) return v.front();
    if (time >= t.back()) return v.back();
    auto it = std::upper_bound(t.begin(), t.end(), time);
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (time - t[k]) / (t[k + 1] - t[k]);
    return (1.0 - w) * v[k] + w * v[k + 1];
}

double ScalarGrid::max() const { return *std::max_element(v.begin(), v.end()); }

double ScalarGrid::min() const { return *std::min_element(v.begin(), v.end()); }

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!a.grid.same_nodes(b.grid)) throw GridMismatch("grid functions live on different grids");
    if (a.dim() != b.dim()) throw GridMismatch("grid functions have different dimensions");
}

}  // namespace sweep
