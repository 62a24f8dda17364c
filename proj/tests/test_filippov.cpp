#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sweep/config.hpp"
#include "sweep/filippov.hpp"
#include "sweep/scenario.hpp"

using namespace sweep;

namespace {

ProblemSpec scenario_spec(const char* name) {
    const Scenario* sc = find_scenario(name);
    REQUIRE(sc != nullptr);
    return build_problem(sc->config.at("problem"));
}

}  // namespace

TEST_CASE("refine_selection") {
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 10);

    SUBCASE("singleton pins every node to its point") {
        ProblemSpec spec = scenario_spec("singleton-F");
        GridFunction x = GridFunction::constant(grid, Vec{1.0}, SampleKind::State);
        GridFunction z = GridFunction::zeros(grid, 1, SampleKind::Selection);
        const GridFunction out = refine_selection(spec, z, x);
        for (const Vec& v : out.values) CHECK(v == Vec{0.3});
    }
    SUBCASE("x-independent pair is a fixed point at -1") {
        ProblemSpec spec = scenario_spec("two-point-F");
        GridFunction x = GridFunction::constant(grid, Vec{0.4}, SampleKind::State);
        GridFunction z = GridFunction::constant(grid, Vec{-1.0}, SampleKind::Selection);
        const GridFunction out = refine_selection(spec, z, x);
        for (const Vec& v : out.values) CHECK(v == Vec{-1.0});
    }
    SUBCASE("interior point of a ball-valued map is already a member") {
        ProblemSpec spec;
        spec.t0 = 0.0;
        spec.t_end = 1.0;
        spec.x0 = spec.q0 = Vec{0.0};
        spec.set = make_free_space(1);
        spec.drift = make_zero_drift();
        spec.kernel = make_zero_kernel();
        spec.perturb = make_ball_perturbation(Vec{0.0}, 2.0);
        GridFunction x = GridFunction::zeros(grid, 1, SampleKind::State);
        GridFunction z = GridFunction::constant(grid, Vec{1.5}, SampleKind::Selection);
        const GridFunction out = refine_selection(spec, z, x);
        for (const Vec& v : out.values) CHECK(v == Vec{1.5});
    }
}

TEST_CASE("selection_residual") {
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 50);
    ProblemSpec spec = scenario_spec("two-point-F");
    GridFunction z = GridFunction::constant(grid, Vec{-1.0}, SampleKind::Selection);
    const Trajectory traj = solve_fixed_selection(spec, z, grid);

    CHECK(selection_residual(spec, z, traj) == 0.0);

    GridFunction zero = GridFunction::zeros(grid, 1, SampleKind::Selection);
    Trajectory still = traj;
    still.z = zero;
    CHECK(selection_residual(spec, zero, still) == doctest::Approx(1.0));

    ProblemSpec single = scenario_spec("singleton-F");
    GridFunction zc = GridFunction::constant(grid, Vec{0.3}, SampleKind::Selection);
    const Trajectory ts = solve_fixed_selection(single, zc, grid);
    CHECK(selection_residual(single, zc, ts) == 0.0);
}

TEST_CASE("iterate on the two-point scenario: hand-simulated loop") {
    ProblemSpec spec = scenario_spec("two-point-F");
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 1000);
    const IterateResult res = iterate(spec, grid);

    CHECK(res.report.converged);
    CHECK(res.report.iterations_used == 1);
    // z stays at the lexicographic tie-break -1; the state rises at unit speed
    for (const Vec& v : res.z.values) CHECK(v == Vec{-1.0});
    for (std::size_t k = 0; k < grid.node_count(); ++k)
        CHECK(res.traj.x.values[k][0] == doctest::Approx(grid.nodes[k]).epsilon(1e-13));
    CHECK(res.report.records.back().selection_residual == 0.0);
    CHECK(selection_residual(spec, res.z, res.traj) == 0.0);
}

TEST_CASE("iterate on the singleton scenario converges at iteration 1") {
    ProblemSpec spec = scenario_spec("singleton-F");
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 1000);
    const IterateResult res = iterate(spec, grid);
    CHECK(res.report.converged);
    CHECK(res.report.iterations_used == 1);
    for (const Vec& v : res.z.values) CHECK(v == Vec{0.3});
}

TEST_CASE("iterate with a ball-valued map containing zero converges immediately") {
    ProblemSpec spec;
    spec.t0 = 0.0;
    spec.t_end = 1.0;
    spec.x0 = spec.q0 = Vec{0.25};
    spec.set = make_halfspace(Vec{1.0}, 0.0, 0.0);
    spec.drift = make_zero_drift();
    spec.kernel = make_zero_kernel();
    spec.perturb = make_ball_perturbation(Vec{0.0}, 0.7);
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 500);
    const IterateResult res = iterate(spec, grid);
    CHECK(res.report.converged);
    CHECK(res.report.iterations_used == 0);
    for (std::size_t k = 0; k < grid.node_count(); ++k)
        CHECK(res.traj.x.values[k] == res.q.x.values[k]);
}

TEST_CASE("iterate on the Lipschitz two-point scenario") {
    ProblemSpec spec = scenario_spec("lipschitz-two-point-F");
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 1000);
    IterateOptions opt;
    opt.keep_trace = true;
    const IterateResult res = iterate(spec, grid, opt);
    const double slack = res.cert.slack(grid.max_step());

    CHECK(res.report.converged);
    CHECK(res.report.iterations_used <= 20);
    CHECK(res.report.tol_used >= res.report.tol_requested);  // clamped

    SUBCASE("pointwise Lipschitz chain with 2 eps_F headroom") {
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < res.z_trace.size(); ++i) {
            for (std::size_t k = 0; k < grid.node_count(); ++k) {
                const double lhs = dist(res.z_trace[i + 1].values[k], res.z_trace[i].values[k]);
                const double ydelta = i == 0 ? norm(res.y_trace[0].values[k])
                                             : dist(res.y_trace[i].values[k],
                                                    res.y_trace[i - 1].values[k]);
                worst = std::max(worst, lhs - (0.5 * ydelta + 2.0 * spec.perturb.eps_F));
            }
        }
        CHECK(worst <= 0.0);
    }

    SUBCASE("selection and shifted-state bounds") {
        for (const GridFunction& z : res.z_trace)
            for (std::size_t k = 0; k < grid.node_count(); ++k)
                CHECK(norm(z.values[k]) <= 1.5 + spec.perturb.eps_F);
        for (const GridFunction& y : res.y_trace)
            for (std::size_t k = 0; k < grid.node_count(); ++k)
                CHECK(norm(y.values[k]) <=
                      res.cert.Phi * res.cert.r.at(grid.nodes[k]) + slack);
    }

    SUBCASE("factorial domination at every iteration") {
        for (const IterationRecord& r : res.report.records)
            CHECK(r.sup_y_delta <= 1.1 * r.factorial_bound + slack);
    }

    SUBCASE("z-deltas decay once i exceeds c(T)") {
        const double cT = res.cert.c.back();
        for (std::size_t i = 0; i + 1 < res.report.records.size(); ++i) {
            if (static_cast<double>(i) < cT) continue;
            CHECK(res.report.records[i + 1].sup_z_delta <=
                  res.report.records[i].sup_z_delta + 1e-12);
        }
    }

    SUBCASE("final estimates") {
        for (std::size_t k = 0; k < grid.node_count(); ++k) {
            CHECK(dist(res.traj.x.values[k], res.q.x.values[k]) <=
                  res.cert.Phi * res.cert.r.at(grid.nodes[k]) + slack);
            CHECK(norm(res.z.values[k]) <= res.cert.rdot.at(grid.nodes[k]) + 1e-10);
        }
    }

    SUBCASE("residual is certified against the clamped tolerance") {
        CHECK(selection_residual(spec, res.z, res.traj) <=
              res.report.tol_used * (1.0 + 0.5) + spec.perturb.eps_F);
    }
}

TEST_CASE("iteration budget exhausted reports non-convergence") {
    ProblemSpec spec = scenario_spec("lipschitz-two-point-F");
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 1000);
    IterateOptions opt;
    opt.max_iter = 1;
    const IterateResult res = iterate(spec, grid, opt);
    CHECK_FALSE(res.report.converged);
    CHECK(res.report.iterations_used == 1);
    // the returned pair is still consistent
    CHECK(selection_residual(spec, res.z, res.traj) ==
          doctest::Approx(res.report.records.back().sup_z_delta).epsilon(0.5));
}

TEST_CASE("nonpositive tolerance and degenerate grids are rejected") {
    ProblemSpec spec = scenario_spec("two-point-F");
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 10);
    IterateOptions opt;
    opt.tol = 0.0;
    CHECK_THROWS_AS(iterate(spec, grid, opt), ConfigError);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0.0, 10), ConfigError);
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 1.0, 0), ConfigError);
}

TEST_CASE("pipeline determinism: identical reruns are bit-exact") {
    ProblemSpec spec = scenario_spec("lipschitz-two-point-F");
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 500);
    const IterateResult a = iterate(spec, grid);
    const IterateResult b = iterate(spec, grid);
    REQUIRE(a.report.iterations_used == b.report.iterations_used);
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        CHECK(a.z.values[k] == b.z.values[k]);
        CHECK(a.traj.x.values[k] == b.traj.x.values[k]);
    }
}

TEST_CASE("factorial bounds in the report are nonincreasing past c(T)") {
    ProblemSpec spec = scenario_spec("lipschitz-two-point-F");
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 1000);
    IterateOptions opt;
    opt.tol = 1e-6;
    opt.max_iter = 30;
    const IterateResult res = iterate(spec, grid, opt);
    const double cT = res.cert.c.back();
    for (std::size_t i = 0; i + 1 < res.report.records.size(); ++i) {
        if (static_cast<double>(i) < cT) continue;
        CHECK(res.report.records[i + 1].factorial_bound <=
              res.report.records[i].factorial_bound * (1.0 + 1e-12));
    }
}
