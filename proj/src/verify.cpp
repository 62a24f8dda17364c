#include "sweep/verify.hpp"

#include <algorithm>
#include <cmath>

#include "sweep/sampling.hpp"
#include "sweep/scenario.hpp"

namespace sweep {

namespace {

double probe_radius(const ProblemSpec& spec) {
    return 2.0 * (1.0 + norm(spec.x0)) +
           std::abs(spec.set.variation(spec.t_end) - spec.set.variation(spec.t0));
}

CheckResult geometry_idempotence(const ProblemSpec& spec, std::size_t samples, Sampler& rng) {
    CheckResult c{"geometry.projection_idempotence"};
    c.threshold = 10.0 * spec.set.eps_geo;
    const double radius = probe_radius(spec);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = rng.uniform(spec.t0, spec.t_end);
        const Vec y = rng.cube(spec.dim(), radius);
        if (spec.set.distance(t, y) >= 0.95 * spec.set.prox_const) continue;
        const Vec p = project(spec.set, t, y);
        c.violation = std::max(c.violation, dist(project(spec.set, t, p), p));
    }
    c.pass = c.violation <= c.threshold;
    return c;
}

CheckResult geometry_distance_consistency(const ProblemSpec& spec, std::size_t samples,
                                          Sampler& rng) {
    CheckResult c{"geometry.distance_consistency"};
    c.threshold = spec.set.eps_geo;
    const double radius = probe_radius(spec);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = rng.uniform(spec.t0, spec.t_end);
        const Vec y = rng.cube(spec.dim(), radius);
        if (spec.set.distance(t, y) >= 0.95 * spec.set.prox_const) continue;
        const Vec p = project(spec.set, t, y);
        c.violation = std::max(c.violation, std::abs(dist(p, y) - spec.set.distance(t, y)));
    }
    c.pass = c.violation <= c.threshold;
    return c;
}

/// Draws a unit proximal normal at time t by projecting a nearby exterior
/// probe; returns false when no probe lands in the sampling window.
bool draw_normal(const ProblemSpec& spec, Sampler& rng, double t, double radius, Vec& x, Vec& v) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        const Vec y = rng.cube(spec.dim(), radius);
        const double dy = spec.set.distance(t, y);
        if (dy <= spec.set.eps_geo || dy >= 0.9 * spec.set.prox_const) continue;
        x = project(spec.set, t, y);
        v = y - x;
        v *= rng.unit() / norm(v);  // random normal length in [0, 1)
        return true;
    }
    return false;
}

CheckResult geometry_hypomonotonicity(const ProblemSpec& spec, std::size_t samples, Sampler& rng) {
    CheckResult c{"geometry.hypomonotonicity"};
    c.threshold = 1e-9;
    const double radius = probe_radius(spec);
    std::size_t found = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = rng.uniform(spec.t0, spec.t_end);
        Vec x1, v1, x2, v2;
        if (!draw_normal(spec, rng, t, radius, x1, v1)) continue;
        if (!draw_normal(spec, rng, t, radius, x2, v2)) continue;
        const double res = hypomonotonicity_residual(spec.set, t, x1, v1, x2, v2);
        c.violation = std::max(c.violation, -res);
        ++found;
    }
    if (found == 0) c.note = "no boundary normals reachable; check skipped";
    c.pass = c.violation <= c.threshold;
    return c;
}

CheckResult geometry_variation(const ProblemSpec& spec, std::size_t samples, Sampler& rng) {
    CheckResult c{"geometry.variation"};
    c.threshold = spec.set.eps_geo;
    const double radius = probe_radius(spec);
    std::vector<std::pair<double, double>> pairs;
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < samples / 16 + 2; ++i) {
        const double a = rng.uniform(spec.t0, spec.t_end);
        const double b = rng.uniform(spec.t0, spec.t_end);
        pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    for (std::size_t i = 0; i < 16; ++i) pts.push_back(rng.cube(spec.dim(), radius));
    const VariationReport rep = variation_check(spec.set, pairs, pts);
    c.violation = rep.max_violation;
    c.pass = rep.violations == 0;
    return c;
}

CheckResult fields_deterministic(const ProblemSpec& spec, std::size_t samples, Sampler& rng) {
    CheckResult c{"fields.nearest_deterministic"};
    c.threshold = 0.0;
    const double radius = probe_radius(spec);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = rng.uniform(spec.t0, spec.t_end);
        const Vec x = rng.cube(spec.dim(), radius);
        const Vec w = rng.cube(spec.dim(), radius);
        if (spec.perturb.nearest(t, x, w) != spec.perturb.nearest(t, x, w)) {
            c.pass = false;
            c.violation = 1.0;
            c.note = "repeated call returned a different point";
            break;
        }
    }
    return c;
}

CheckResult fields_transport(const ProblemSpec& spec, std::size_t samples, Sampler& rng) {
    CheckResult c{"fields.transport"};
    c.threshold = spec.perturb.eps_F;
    const double radius = probe_radius(spec);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = rng.uniform(spec.t0, spec.t_end);
        const Vec x = rng.cube(spec.dim(), radius);
        const Vec y = rng.cube(spec.dim(), radius);
        const Vec w = rng.cube(spec.dim(), radius);
        const double dy = dist(spec.perturb.nearest(t, y, w), w);
        const double dx = dist(spec.perturb.nearest(t, x, w), w);
        c.violation = std::max(c.violation, dy - dx - spec.perturb.lip_k(t) * dist(x, y));
    }
    c.pass = c.violation <= c.threshold;
    return c;
}

CheckResult stepper_feasibility(const Trajectory& traj) {
    CheckResult c{"stepper.feasibility"};
    c.threshold = 1e-9;
    for (double r : traj.residuals) c.violation = std::max(c.violation, r);
    c.pass = c.violation <= c.threshold;
    return c;
}

/// Discrete inclusion audit: the defect -xdot - f1 - volterra - z, measured
/// over each step, must point along a proximal normal at the landing node.
CheckResult stepper_inclusion_residual(const ProblemSpec& spec, const Trajectory& traj) {
    CheckResult c{"stepper.inclusion_residual"};
    c.threshold = 0.0;
    const TimeGrid& grid = traj.grid();
    std::size_t failures = 0;
    for (std::size_t k = 0; k + 1 < grid.node_count(); ++k) {
        const double t = grid.nodes[k];
        Vec w = -1.0 * traj.xdot.values[k + 1];
        w -= traj.volterra.values[k];
        w -= traj.z.values[k];
        if (spec.drift.eval) w -= spec.drift.eval(t, traj.x.values[k]);
        const double nw = norm(w);
        if (nw <= 1e-8) continue;  // interior step; defect is rounding noise
        const double step = std::min(grid.step(k), 0.5 * spec.set.prox_const);
        if (!normal_cone_membership(spec.set, grid.nodes[k + 1], traj.x.values[k + 1],
                                    (1.0 / nw) * w, step, 1e-8))
            ++failures;
    }
    c.violation = static_cast<double>(failures);
    c.pass = failures == 0;
    return c;
}

/// The constraint reaction -xdot - f1 - volterra - z must stay inside the
/// velocity majorant phi(t) (plus grid slack).
CheckResult stepper_velocity_bound(const ProblemSpec& spec, const Trajectory& traj,
                                   const BoundCertificate& cert) {
    CheckResult c{"stepper.velocity_bound"};
    c.threshold = 0.0;
    const TimeGrid& grid = traj.grid();
    const double slack = cert.slack(grid.max_step());
    for (std::size_t k = 0; k + 1 < grid.node_count(); ++k) {
        Vec w = traj.xdot.values[k + 1];
        w += traj.volterra.values[k];
        w += traj.z.values[k];
        if (spec.drift.eval) w += spec.drift.eval(grid.nodes[k], traj.x.values[k]);
        c.violation = std::max(c.violation, norm(w) - (cert.phi.at(grid.nodes[k + 1]) + slack));
    }
    c.pass = c.violation <= c.threshold;
    return c;
}

CheckResult stepper_norm_bound(const Trajectory& traj, const BoundCertificate& cert) {
    CheckResult c{"stepper.norm_bound"};
    const double slack = cert.slack(traj.grid().max_step());
    c.threshold = 0.0;
    double max_norm = 0.0;
    for (const Vec& x : traj.x.values) max_norm = std::max(max_norm, norm(x));
    c.violation = std::max(0.0, max_norm - (cert.eta + slack));
    c.note = "max ||x_k|| = " + std::to_string(max_norm) + ", eta = " + std::to_string(cert.eta);
    c.pass = c.violation <= c.threshold;
    return c;
}

bool same_values(const GridFunction& a, const GridFunction& b) {
    for (std::size_t k = 0; k < a.values.size(); ++k)
        if (a.values[k] != b.values[k]) return false;
    return true;
}

}  // namespace

ordered_json certificate_to_json(const BoundCertificate& cert) {
    auto sampled = [](const ScalarGrid& g) {
        ordered_json arr = ordered_json::array();
        if (g.t.empty()) return arr;
        const std::size_t stride = std::max<std::size_t>(1, g.t.size() / 256);
        for (std::size_t i = 0; i < g.t.size(); i += stride)
            arr.push_back(ordered_json::array({g.t[i], g.v[i]}));
        if ((g.t.size() - 1) % stride != 0)
            arr.push_back(ordered_json::array({g.t.back(), g.v.back()}));
        return arr;
    };
    ordered_json j;
    j["eta"] = cert.eta;
    j["Psi"] = cert.Psi;
    j["Phi"] = cert.Phi;
    j["r0"] = cert.r0;
    j["b"] = sampled(cert.b);
    j["K"] = sampled(cert.K);
    j["phi"] = sampled(cert.phi);
    j["c"] = sampled(cert.c);
    j["r"] = sampled(cert.r);
    j["rdot"] = sampled(cert.rdot);
    return j;
}

ordered_json iteration_report_to_json(const IterationReport& report,
                                      const BoundCertificate& cert) {
    ordered_json j;
    j["converged"] = report.converged;
    j["iterations_used"] = report.iterations_used;
    j["tol_requested"] = report.tol_requested;
    j["tol_used"] = report.tol_used;
    j["records"] = ordered_json::array();
    for (const IterationRecord& r : report.records) {
        j["records"].push_back({{"iteration", r.iteration},
                                {"sup_y_delta", r.sup_y_delta},
                                {"sup_z_delta", r.sup_z_delta},
                                {"factorial_bound", r.factorial_bound},
                                {"selection_residual", r.selection_residual}});
    }
    j["certificate"] = certificate_to_json(cert);
    return j;
}

namespace {

ordered_json check_to_json(const CheckResult& c) {
    ordered_json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["violation"] = c.violation;
    j["threshold"] = c.threshold;
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

/// RK4 reference integration of the equality-case comparison systems; used
/// to confirm that the Gronwall evaluators dominate true solutions.
double reference_linear_ode(double rho0, double a, double b1, double b2, double T,
                            std::size_t steps) {
    // rho' = a + b1 rho + b2 m, m' = rho (m carries the memory integral).
    double rho = rho0, m = 0.0;
    const double h = T / static_cast<double>(steps);
    auto f = [&](double r, double mm) { return std::pair{a + b1 * r + b2 * mm, r}; };
    for (std::size_t k = 0; k < steps; ++k) {
        auto [k1r, k1m] = f(rho, m);
        auto [k2r, k2m] = f(rho + 0.5 * h * k1r, m + 0.5 * h * k1m);
        auto [k3r, k3m] = f(rho + 0.5 * h * k2r, m + 0.5 * h * k2m);
        auto [k4r, k4m] = f(rho + h * k3r, m + h * k3m);
        rho += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
        m += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
    }
    return rho;
}

CheckResult bounds_gronwall_domination() {
    CheckResult c{"bounds.gronwall_domination"};
    c.threshold = 0.0;
    const TimeGrid quad = TimeGrid::uniform(0.0, 1.0, 2048);
    auto one = [](double) { return 1.0; };
    const ScalarGrid bound = gronwall_linear(1.0, one, one, one, quad);
    const double truth = reference_linear_ode(1.0, 1.0, 1.0, 1.0, 1.0, 4096);
    c.violation = std::max(0.0, truth - bound.back());
    // sqrt form: rho' = 2 sqrt(rho), rho(0)=0 has sqrt(rho)(t) = t.
    auto zero = [](double) { return 0.0; };
    auto two = [](double) { return 2.0; };
    const ScalarGrid sq = gronwall_sqrt(0.0, zero, two, zero, quad);
    c.violation = std::max(c.violation, 1.0 - sq.back());
    c.pass = c.violation <= c.threshold;
    return c;
}

}  // namespace

VerificationOutcome run_verification(const RunConfig& cfg, const VerifyOptions& opt) {
    VerificationOutcome out;
    VerificationReport& rep = out.report;
    rep.scenario = cfg.scenario.empty() ? "(inline)" : cfg.scenario;

    const ProblemSpec spec = build_problem(cfg.problem);
    const TimeGrid grid = build_grid(cfg, spec);

    rep.hypotheses = validate(spec, opt.hypothesis_plan);
    rep.pass = rep.hypotheses.pass;
    if (!rep.pass) return out;  // declared moduli are wrong; downstream suites are meaningless

    Sampler rng(opt.seed);
    rep.checks.push_back(geometry_idempotence(spec, opt.geometry_samples, rng));
    rep.checks.push_back(geometry_distance_consistency(spec, opt.geometry_samples, rng));
    rep.checks.push_back(geometry_hypomonotonicity(spec, opt.geometry_samples, rng));
    rep.checks.push_back(geometry_variation(spec, opt.geometry_samples, rng));
    rep.checks.push_back(fields_deterministic(spec, opt.field_samples, rng));
    rep.checks.push_back(fields_transport(spec, opt.field_samples, rng));

    IterateOptions iter_opt;
    iter_opt.tol = cfg.tol;
    iter_opt.max_iter = cfg.max_iter;
    iter_opt.keep_trace = true;
    IterateResult run = iterate(spec, grid, iter_opt);
    rep.iterations = run.report;
    rep.certificate = run.cert;
    out.trajectory = run.traj;
    const double slack = run.cert.slack(grid.max_step());

    {
        CheckResult c{"filippov.converged"};
        c.threshold = 0.0;
        c.violation = run.report.converged ? 0.0 : 1.0;
        c.pass = run.report.converged;
        if (!run.report.converged) c.note = "max_iter reached";
        rep.checks.push_back(c);
    }

    rep.checks.push_back(stepper_feasibility(run.traj));
    rep.checks.push_back(stepper_inclusion_residual(spec, run.traj));
    rep.checks.push_back(stepper_velocity_bound(spec, run.traj, run.cert));
    rep.checks.push_back(stepper_norm_bound(run.traj, run.cert));

    {
        CheckResult c{"stepper.determinism"};
        c.threshold = 0.0;
        Trajectory again = solve_fixed_selection(spec, run.traj.z, grid);
        c.pass = same_values(again.x, run.traj.x) && same_values(again.xdot, run.traj.xdot);
        if (!c.pass) c.violation = 1.0;
        rep.checks.push_back(c);
    }

    // Grid-refinement convergence against the closed-form solution, when the
    // scenario declares one.
    if (const Scenario* sc = find_scenario(cfg.scenario); sc && sc->exact) {
        CheckResult c{"stepper.refinement_convergence"};
        c.threshold = 0.0;
        auto sup_error = [&](const TimeGrid& g, const Trajectory& t) {
            double e = 0.0;
            for (std::size_t k = 0; k < g.node_count(); ++k)
                e = std::max(e, dist(t.x.values[k], sc->exact(g.nodes[k])));
            return e;
        };
        const double err_h = sup_error(grid, run.traj);
        const TimeGrid fine = TimeGrid::uniform(spec.t0, spec.t_end, 2 * grid.step_count());
        IterateResult run_fine = iterate(spec, fine, iter_opt);
        const double err_fine = sup_error(fine, run_fine.traj);
        if (err_h <= 1e-10) {
            c.note = "error already at rounding level; ratio not informative";
        } else {
            const double ratio = err_fine > 0.0 ? err_h / err_fine : 1e300;
            c.violation = std::max(0.0, 1.8 - ratio);
            c.note = "error ratio h/(h/2) = " + std::to_string(ratio);
        }
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    // Filippov invariants from the retained iteration trace.
    const double sup_k = [&] {
        double m = 0.0;
        for (double t : grid.nodes) m = std::max(m, spec.perturb.lip_k(t));
        return m;
    }();
    const double eps_F = spec.perturb.eps_F;

    {
        CheckResult c{"filippov.lipschitz_chain"};
        c.threshold = 0.0;
        for (std::size_t i = 0; i + 1 < run.z_trace.size(); ++i) {
            const GridFunction& z_cur = run.z_trace[i];
            const GridFunction& z_next = run.z_trace[i + 1];
            const GridFunction& y_cur = run.y_trace[i];
            for (std::size_t k = 0; k < grid.node_count(); ++k) {
                const double lhs = dist(z_next.values[k], z_cur.values[k]);
                const double ydelta =
                    i == 0 ? norm(y_cur.values[k]) : dist(y_cur.values[k], run.y_trace[i - 1].values[k]);
                const double rhs = spec.perturb.lip_k(grid.nodes[k]) * ydelta + 2.0 * eps_F;
                c.violation = std::max(c.violation, lhs - rhs);
            }
        }
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"filippov.selection_bound"};
        c.threshold = 0.0;
        for (const GridFunction& z : run.z_trace)
            for (std::size_t k = 0; k < grid.node_count(); ++k)
                c.violation = std::max(c.violation, norm(z.values[k]) -
                                                        (spec.perturb.gamma(grid.nodes[k]) + eps_F));
        for (const GridFunction& y : run.y_trace)
            for (std::size_t k = 0; k < grid.node_count(); ++k)
                c.violation =
                    std::max(c.violation, norm(y.values[k]) -
                                              (run.cert.Phi * run.cert.r.at(grid.nodes[k]) + slack));
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"filippov.factorial_domination"};
        c.threshold = 0.0;
        for (const IterationRecord& r : run.report.records)
            c.violation =
                std::max(c.violation, r.sup_y_delta - (1.1 * r.factorial_bound + slack));
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"filippov.cauchy_decay"};
        c.threshold = 1e-12;
        const double cT = run.cert.c.back();
        for (std::size_t i = 0; i + 1 < run.report.records.size(); ++i) {
            if (static_cast<double>(i) < cT) continue;
            c.violation = std::max(c.violation, run.report.records[i + 1].sup_z_delta -
                                                    run.report.records[i].sup_z_delta);
        }
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"filippov.residual"};
        c.threshold = run.report.tol_used * (1.0 + sup_k) + eps_F;
        c.violation = selection_residual(spec, run.z, run.traj);
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"filippov.estim_final_x"};
        c.threshold = 0.0;
        for (std::size_t k = 0; k < grid.node_count(); ++k) {
            const double lhs = dist(run.traj.x.values[k], run.q.x.values[k]);
            const double rhs = run.cert.Phi * run.cert.r.at(grid.nodes[k]) + slack;
            c.violation = std::max(c.violation, lhs - rhs);
        }
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"filippov.estim_final_z"};
        c.threshold = 0.0;
        for (std::size_t k = 0; k < grid.node_count(); ++k) {
            const double lhs = norm(run.z.values[k]);
            const double rhs = run.cert.rdot.at(grid.nodes[k]) + 1e-10;
            c.violation = std::max(c.violation, lhs - rhs);
        }
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"filippov.determinism"};
        c.threshold = 0.0;
        IterateOptions again_opt = iter_opt;
        again_opt.keep_trace = false;
        IterateResult again = iterate(spec, grid, again_opt);
        c.pass = same_values(again.z, run.z) && same_values(again.traj.x, run.traj.x);
        if (!c.pass) c.violation = 1.0;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"bounds.psi_phi_at_least_one"};
        c.threshold = 0.0;
        c.violation = std::max(0.0, std::max(1.0 - run.cert.Psi, 1.0 - run.cert.Phi));
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"bounds.comparison_shape"};  // r >= r0, rdot >= gamma, c ramps from 0
        c.threshold = 1e-12;
        c.violation = std::max(0.0, run.cert.r0 - run.cert.r.min());
        for (std::size_t i = 0; i < run.cert.rdot.t.size(); ++i)
            c.violation = std::max(c.violation,
                                   spec.perturb.gamma(run.cert.rdot.t[i]) - run.cert.rdot.v[i]);
        c.violation = std::max(c.violation, std::abs(run.cert.c.front()));
        for (std::size_t i = 0; i + 1 < run.cert.c.v.size(); ++i)
            c.violation = std::max(c.violation, run.cert.c.v[i] - run.cert.c.v[i + 1]);
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    {
        CheckResult c{"bounds.fubini_identity"};
        const TimeGrid quad = TimeGrid::uniform(spec.t0, spec.t_end, 2048);
        c.threshold = std::max(1e-6, 10.0 * quad.max_step());
        for (std::size_t i = 1; i <= 3; ++i) {
            auto [lhs, rhs] = fubini_identity_check(spec, run.cert.Phi, i, spec.t_end, quad);
            c.violation = std::max(c.violation, std::abs(lhs - rhs));
        }
        c.pass = c.violation <= c.threshold;
        rep.checks.push_back(c);
    }

    rep.checks.push_back(bounds_gronwall_domination());

    for (const CheckResult& c : rep.checks) rep.pass = rep.pass && c.pass;
    return out;
}

ordered_json verification_report_to_json(const VerificationReport& report) {
    ordered_json j;
    j["scenario"] = report.scenario;
    j["pass"] = report.pass;
    j["hypotheses"] = ordered_json::array();
    for (const CheckResult& c : report.hypotheses.checks) j["hypotheses"].push_back(check_to_json(c));
    j["certificate"] = certificate_to_json(report.certificate);
    j["iterations"] = iteration_report_to_json(report.iterations, report.certificate);
    j["checks"] = ordered_json::array();
    for (const CheckResult& c : report.checks) j["checks"].push_back(check_to_json(c));
    return j;
}

}  // namespace sweep
