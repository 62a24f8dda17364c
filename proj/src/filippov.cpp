#include "sweep/filippov.hpp"

#include <algorithm>
#include <cmath>

namespace sweep {

GridFunction refine_selection(const ProblemSpec& spec, const GridFunction& prev_z,
                              const GridFunction& current_x) {
    require_same_grid(prev_z, current_x);
    GridFunction out = prev_z;
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.values[k] =
            spec.perturb.nearest(out.grid.nodes[k], current_x.values[k], prev_z.values[k]);
    }
    return out;
}

double selection_residual(const ProblemSpec& spec, const GridFunction& z, const Trajectory& traj) {
    require_same_grid(z, traj.x);
    double res = 0.0;
    for (std::size_t k = 0; k < z.values.size(); ++k) {
        const Vec member =
            spec.perturb.nearest(z.grid.nodes[k], traj.x.values[k], z.values[k]);
        res = std::max(res, dist(member, z.values[k]));
    }
    return res;
}

namespace {

double sup_delta(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k)
        m = std::max(m, dist(a.values[k], b.values[k]));
    return m;
}

}  // namespace

IterateResult iterate(const ProblemSpec& spec, const TimeGrid& grid, const IterateOptions& opt) {
    if (!(opt.tol > 0.0)) throw ConfigError("iterate: tol must be positive");

    IterateResult res;
    res.cert = compute_certificate(spec, spec.r0, grid, opt.certificate);
    res.q = solve_unperturbed(spec, grid, opt.solve);

    double sup_gamma = 0.0;
    for (double t : grid.nodes) sup_gamma = std::max(sup_gamma, spec.perturb.gamma(t));
    const double noise_floor = 10.0 * grid.max_step() * (1.0 + sup_gamma);

    res.report.tol_requested = opt.tol;
    res.report.tol_used = std::max(opt.tol, noise_floor);
    const double tol = res.report.tol_used;

    // z_0: minimal-norm selection of F(t, q(t)), i.e. of the shifted map at
    // y_0 == 0. The shifted map is never materialized; F is always queried at
    // the unshifted state.
    GridFunction z = GridFunction::zeros(grid, spec.dim(), SampleKind::Selection);
    for (std::size_t k = 0; k < grid.node_count(); ++k)
        z.values[k] = minimal_norm_selection(spec.perturb, grid.nodes[k], res.q.x.values[k]);

    GridFunction y_prev = GridFunction::zeros(grid, spec.dim(), SampleKind::State);
    if (opt.keep_trace) res.z_trace.push_back(z);

    for (std::size_t i = 0; i < opt.max_iter; ++i) {
        res.traj = solve_fixed_selection(spec, z, grid, opt.solve);

        GridFunction y = res.traj.x;
        y.kind = SampleKind::State;
        for (std::size_t k = 0; k < grid.node_count(); ++k) y.values[k] -= res.q.x.values[k];

        IterationRecord rec;
        rec.iteration = i;
        rec.sup_y_delta = sup_delta(y, y_prev);
        rec.factorial_bound = factorial_bound(res.cert, spec, i, spec.t_end);

        GridFunction refined = refine_selection(spec, z, res.traj.x);
        rec.sup_z_delta = sup_delta(refined, z);
        rec.selection_residual = rec.sup_z_delta;  // refinement realizes the residual
        res.report.records.push_back(rec);
        if (opt.keep_trace) {
            res.y_trace.push_back(y);
            res.z_trace.push_back(refined);
        }

        res.report.iterations_used = i;
        if (rec.sup_y_delta <= tol || rec.factorial_bound <= tol) {
            res.report.converged = true;
            res.z = z;
            return res;
        }
        z = std::move(refined);
        y_prev = std::move(y);
    }
    res.report.iterations_used = opt.max_iter;
    res.z = z;
    res.traj = solve_fixed_selection(spec, z, grid, opt.solve);
    return res;
}

}  // namespace sweep
