#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sweep/fields.hpp"
#include "sweep/sampling.hpp"

using namespace sweep;

namespace {

ProblemSpec zero_spec() {
    ProblemSpec spec;
    spec.t0 = 0.0;
    spec.t_end = 1.0;
    spec.x0 = Vec{0.0};
    spec.q0 = Vec{0.0};
    spec.set = make_halfspace(Vec{1.0}, -1.0, 0.0);  // [-1, inf), static, contains 0
    spec.drift = make_zero_drift();
    spec.kernel = make_zero_kernel();
    spec.perturb = make_zero_perturbation(1);
    return spec;
}

}  // namespace

TEST_CASE("validate passes with zero data and reports zero violations") {
    const ValidationReport rep = validate(zero_spec(), SamplingPlan{});
    CHECK(rep.pass);
    for (const CheckResult& c : rep.checks) {
        CAPTURE(c.name);
        CHECK(c.pass);
        CHECK(c.violation <= c.threshold);
    }
}

TEST_CASE("validate rejects an infeasible initial point") {
    ProblemSpec spec = zero_spec();
    spec.x0 = Vec{-2.0};
    CHECK_THROWS_AS(validate(spec, SamplingPlan{}), InfeasibleInitialPoint);
}

TEST_CASE("under-declared gamma fails the boundedness check") {
    ProblemSpec spec = zero_spec();
    spec.perturb = make_finite_perturbation({Vec{-1.0}, Vec{1.0}}, 0.5);
    const ValidationReport rep = validate(spec, SamplingPlan{});
    CHECK_FALSE(rep.pass);
    bool found = false;
    for (const CheckResult& c : rep.checks) {
        if (c.name == "perturb_bounded") {
            found = true;
            CHECK_FALSE(c.pass);
            CHECK(c.violation == doctest::Approx(0.5));
        }
    }
    CHECK(found);
}

TEST_CASE("minimal norm selection") {
    SUBCASE("ball containing the origin returns the origin") {
        PerturbationMap p = make_ball_perturbation(Vec{0.0}, 2.0);
        CHECK(minimal_norm_selection(p, 0.0, Vec{0.0}) == Vec{0.0});
    }
    SUBCASE("equidistant pair breaks ties lexicographically") {
        PerturbationMap p = make_finite_perturbation({Vec{-1.0}, Vec{1.0}});
        CHECK(minimal_norm_selection(p, 0.0, Vec{0.0}) == Vec{-1.0});
    }
    SUBCASE("singleton returns its point") {
        PerturbationMap p = make_singleton_perturbation(Vec{0.3, -0.1});
        CHECK(minimal_norm_selection(p, 0.0, Vec{0.0, 0.0}) == Vec{0.3, -0.1});
    }
}

TEST_CASE("nearest oracles are deterministic (bit-exact)") {
    std::vector<PerturbationMap> maps;
    maps.push_back(make_finite_perturbation({Vec{-1.0}, Vec{1.0}}));
    maps.push_back(make_ball_perturbation(Vec{0.8}, 0.3));
    maps.push_back(make_two_point_lipschitz_perturbation());

    Sampler rng(3);
    for (const auto& p : maps) {
        for (int i = 0; i < 200; ++i) {
            const double t = rng.uniform(0.0, 1.0);
            const Vec x = rng.cube(1, 3.0);
            const Vec w = rng.cube(1, 3.0);
            CHECK(p.nearest(t, x, w) == p.nearest(t, x, w));
        }
    }
}

TEST_CASE("Hausdorff transport invariant holds on sampled quadruples") {
    std::vector<PerturbationMap> maps;
    maps.push_back(make_finite_perturbation({Vec{-1.0}, Vec{1.0}}));
    maps.push_back(make_ball_perturbation(Vec{0.8}, 0.3));
    maps.push_back(make_singleton_perturbation(Vec{0.3}));
    maps.push_back(make_two_point_lipschitz_perturbation());

    Sampler rng(11);
    for (const auto& p : maps) {
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(0.0, 1.0);
            const Vec x = rng.cube(1, 4.0);
            const Vec y = rng.cube(1, 4.0);
            const Vec w = rng.cube(1, 4.0);
            const double dy = dist(p.nearest(t, y, w), w);
            const double dx = dist(p.nearest(t, x, w), w);
            worst = std::max(worst, dy - dx - p.lip_k(t) * dist(x, y));
        }
        CHECK(worst <= p.eps_F);
    }
}

TEST_CASE("two-point Lipschitz map matches its formula and tie rule") {
    PerturbationMap p = make_two_point_lipschitz_perturbation();
    const double x = 0.7;
    const double lo = -1.0 - 0.5 * std::sin(x);
    const double hi = 1.0 + 0.5 * std::cos(x);
    CHECK(p.nearest(0.0, Vec{x}, Vec{-3.0}) == Vec{lo});
    CHECK(p.nearest(0.0, Vec{x}, Vec{3.0}) == Vec{hi});
    // exact midpoint ties toward the smaller (lower) member
    const double mid = 0.5 * (lo + hi);
    CHECK(p.nearest(0.0, Vec{x}, Vec{mid}) == Vec{lo});
    CHECK(p.gamma(0.0) == doctest::Approx(1.5));
    CHECK(p.lip_k(0.0) == doctest::Approx(0.5));
}

TEST_CASE("kernel domain guard") {
    VolterraKernel k = make_memory_kernel();
    CHECK_THROWS_AS(eval_kernel(k, 0.5, 0.7, Vec{1.0}), KernelDomain);
    CHECK(eval_kernel(k, 0.7, 0.5, Vec{1.0}) == Vec{1.0});
}

TEST_CASE("empty sampling plans are rejected") {
    SamplingPlan plan;
    plan.time_samples = 0;
    CHECK_THROWS_AS(validate(zero_spec(), plan), ConfigError);
}

TEST_CASE("moduli are total on the interval") {
    ProblemSpec spec = zero_spec();
    spec.drift = make_linear_drift(1.0, nullptr, nullptr);
    spec.kernel = make_memory_kernel();
    spec.perturb = make_two_point_lipschitz_perturbation();
    for (double t = 0.0; t <= 1.0; t += 0.125) {
        CHECK(std::isfinite(spec.drift.beta1(t)));
        CHECK(std::isfinite(spec.drift.lip1(10.0, t)));
        CHECK(std::isfinite(spec.kernel.beta2(t)));
        CHECK(std::isfinite(spec.kernel.lip2(10.0, t)));
        CHECK(std::isfinite(spec.perturb.gamma(t)));
        CHECK(std::isfinite(spec.perturb.lip_k(t)));
        CHECK(spec.perturb.gamma(t) >= 0.0);
        CHECK(spec.perturb.lip_k(t) >= 0.0);
    }
}
