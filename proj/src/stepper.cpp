#include "sweep/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sweep {

Vec volterra_term(const ProblemSpec& spec, const GridFunction& x_prefix, std::size_t k,
                  QuadRule rule) {
    const std::size_t d = x_prefix.dim();
    Vec acc(d, 0.0);
    if (k == 0 || !spec.kernel.present()) return acc;
    const auto& nodes = x_prefix.grid.nodes;
    const double tk = nodes[k];
    if (rule == QuadRule::Trapezoid) {
        for (std::size_t j = 0; j < k; ++j) {
            const double h = nodes[j + 1] - nodes[j];
            Vec f0 = eval_kernel(spec.kernel, tk, nodes[j], x_prefix.values[j]);
            Vec f1 = eval_kernel(spec.kernel, tk, nodes[j + 1], x_prefix.values[j + 1]);
            axpy(acc, 0.5 * h, f0);
            axpy(acc, 0.5 * h, f1);
        }
    } else {
        for (std::size_t j = 0; j < k; ++j) {
            const double h = nodes[j + 1] - nodes[j];
            axpy(acc, h, eval_kernel(spec.kernel, tk, nodes[j], x_prefix.values[j]));
        }
    }
    return acc;
}

namespace {

Trajectory run_catching_up(const ProblemSpec& spec, const GridFunction& z, const TimeGrid& grid,
                           const Vec& start, const SolveOptions& opt) {
    if (!z.grid.same_nodes(grid)) throw GridMismatch("selection not sampled on the solver grid");
    const std::size_t d = spec.dim();
    if (z.dim() != d) throw GridMismatch("selection dimension disagrees with the problem");
    const std::size_t n = grid.step_count();

    if (spec.set.distance(grid.front(), start) > spec.set.eps_geo)
        throw InfeasibleInitialPoint("initial point outside C(t0)");
    for (std::size_t k = 0; k <= n; ++k) {
        const double bound = spec.perturb.gamma(grid.nodes[k]) + spec.perturb.eps_F;
        if (norm(z.values[k]) > bound + 1e-12)
            throw Error("selection exceeds the gamma bound at node " + std::to_string(k));
    }

    Trajectory traj;
    traj.x = GridFunction::zeros(grid, d, SampleKind::State);
    traj.xdot = GridFunction::zeros(grid, d, SampleKind::Derivative);
    traj.z = z;
    traj.volterra = GridFunction::zeros(grid, d, SampleKind::Selection);
    traj.residuals.assign(n + 1, 0.0);
    traj.x.values[0] = start;

    // Separable fast path keeps the running sum S_k = sum_{j<k} h_j b(t_j) x_j.
    const bool fast = spec.kernel.separable && !spec.kernel.eval &&
                      opt.quadrature == QuadRule::LeftRectangle;
    Vec running(d, 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.nodes[k];
        const double h = grid.step(k);
        const Vec& xk = traj.x.values[k];

        Vec memory(d, 0.0);
        if (spec.kernel.present()) {
            if (fast) {
                memory = spec.kernel.sep_a(t) * running;
            } else {
                memory = volterra_term(spec, traj.x, k, opt.quadrature);
            }
        }
        traj.volterra.values[k] = memory;

        Vec velocity = memory;
        if (spec.drift.eval) velocity += spec.drift.eval(t, xk);
        velocity += z.values[k];

        Vec predictor = xk;
        axpy(predictor, -h, velocity);
        traj.x.values[k + 1] = project(spec.set, grid.nodes[k + 1], predictor);
        if (!all_finite(traj.x.values[k + 1]))
            throw Error("oracle produced a non-finite state at node " + std::to_string(k + 1));
        traj.xdot.values[k + 1] = (1.0 / h) * (traj.x.values[k + 1] - xk);
        if (fast) axpy(running, h * spec.kernel.sep_b(t), xk);
    }
    traj.xdot.values[0] = n > 0 ? traj.xdot.values[1] : Vec(d, 0.0);
    if (spec.kernel.present()) {
        traj.volterra.values[n] = fast ? spec.kernel.sep_a(grid.nodes[n]) * running
                                       : volterra_term(spec, traj.x, n, opt.quadrature);
    }
    for (std::size_t k = 0; k <= n; ++k)
        traj.residuals[k] = spec.set.distance(grid.nodes[k], traj.x.values[k]);
    return traj;
}

}  // namespace

Trajectory solve_fixed_selection(const ProblemSpec& spec, const GridFunction& z,
                                 const TimeGrid& grid, const SolveOptions& opt) {
    return run_catching_up(spec, z, grid, spec.x0, opt);
}

Trajectory solve_unperturbed(const ProblemSpec& spec, const TimeGrid& grid,
                             const SolveOptions& opt) {
    GridFunction zero = GridFunction::zeros(grid, spec.dim(), SampleKind::Selection);
    return run_catching_up(spec, zero, grid, spec.q0, opt);
}

DeviationReport deviation_check(const Trajectory& a, const Trajectory& b,
                                const BoundCertificate& cert) {
    require_same_grid(a.x, b.x);
    require_same_grid(a.z, b.z);

    const TimeGrid& grid = a.grid();
    const double slack = cert.slack(grid.max_step());
    DeviationReport rep;
    rep.nodes = grid.node_count();

    double z_mass = 0.0;  // sum_{j<k} h_j ||z1_j - z2_j||
    const double base = dist(a.x.values[0], b.x.values[0]);
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        const double lhs = dist(a.x.values[k], b.x.values[k]);
        const double rhs = cert.Phi * (base + z_mass) + slack;
        rep.max_ratio = std::max(rep.max_ratio, rhs > 0.0 ? lhs / rhs : 0.0);
        rep.max_violation = std::max(rep.max_violation, lhs - rhs);
        if (lhs > rhs) ++rep.violations;
        if (k + 1 < grid.node_count())
            z_mass += grid.step(k) * dist(a.z.values[k], b.z.values[k]);
    }
    return rep;
}

}  // namespace sweep
