#include "sweep/fields.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sweep/sampling.hpp"

namespace sweep {

Vec eval_kernel(const VolterraKernel& kernel, double t, double s, const Vec& x) {
    if (s > t) {
        throw KernelDomain("Volterra kernel evaluated with s=" + std::to_string(s) + " > t=" +
                           std::to_string(t));
    }
    if (kernel.eval) return kernel.eval(t, s, x);
    if (kernel.separable) return (kernel.sep_a(t) * kernel.sep_b(s)) * x;
    return Vec(x.size(), 0.0);
}

Vec eval_drift(const ProblemSpec& spec, double t, const Vec& x) {
    if (spec.drift.eval) return spec.drift.eval(t, x);
    return Vec(x.size(), 0.0);
}

PerturbationMap make_zero_perturbation(std::size_t dim) {
    PerturbationMap p;
    p.nearest = [dim](double, const Vec&, const Vec&) { return Vec(dim, 0.0); };
    p.gamma = [](double) { return 0.0; };
    p.lip_k = [](double) { return 0.0; };
    return p;
}

Vec minimal_norm_selection(const PerturbationMap& perturb, double t, const Vec& x) {
    return perturb.nearest(t, x, Vec(x.size(), 0.0));
}

bool lex_less(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

/// Probe points for kernel growth are drawn from the union of the C(t):
/// sample a cube point, then project it onto C(t).
Vec sample_in_set(const MovingSetOracle& set, Sampler& rng, double t, double radius) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        Vec y = rng.cube(set.dim, radius);
        if (set.distance(t, y) < set.prox_const) return set.project_fn(t, y);
    }
    // Fall back to nudging from an interior direction; built-in oracles never
    // reach this (their uniqueness region misses at most one point).
    return set.project_fn(t, rng.direction(set.dim));
}

}  // namespace

ValidationReport validate(const ProblemSpec& spec, const SamplingPlan& plan) {
    if (plan.time_samples == 0 || plan.space_samples == 0)
        throw ConfigError("validate: sampling plan must be non-empty");

    const auto& set = spec.set;
    if (set.distance(spec.t0, spec.x0) > set.eps_geo)
        throw InfeasibleInitialPoint("x0 lies outside C(t0): distance=" +
                                     std::to_string(set.distance(spec.t0, spec.x0)));
    if (set.distance(spec.t0, spec.q0) > set.eps_geo)
        throw InfeasibleInitialPoint("q0 lies outside C(t0): distance=" +
                                     std::to_string(set.distance(spec.t0, spec.q0)));

    ValidationReport report;
    Sampler rng(plan.seed);
    const std::size_t d = spec.dim();
    const double eps_F = spec.perturb.eps_F;

    double radius = plan.radius;
    if (radius <= 0.0) {
        radius = 2.0 * (1.0 + norm(spec.x0)) +
                 std::abs(set.variation(spec.t_end) - set.variation(spec.t0));
    }

    std::vector<double> times(plan.time_samples);
    for (std::size_t i = 0; i < times.size(); ++i)
        times[i] = spec.t0 + (spec.t_end - spec.t0) * (times.size() == 1
                                                           ? 0.0
                                                           : static_cast<double>(i) /
                                                                 static_cast<double>(times.size() - 1));

    // Moduli must be finite and nonnegative everywhere on the interval.
    {
        CheckResult c{"moduli_finite_nonnegative"};
        c.threshold = 0.0;
        const double eta_probe = radius;
        for (double t : times) {
            double vals[] = {spec.drift.beta1 ? spec.drift.beta1(t) : 0.0,
                             spec.kernel.beta2 ? spec.kernel.beta2(t) : 0.0,
                             spec.perturb.gamma(t),
                             spec.perturb.lip_k(t),
                             set.variation_rate(t),
                             spec.drift.lip1 ? spec.drift.lip1(eta_probe, t) : 0.0,
                             spec.kernel.lip2 ? spec.kernel.lip2(eta_probe, t) : 0.0,
                             spec.kernel.g ? spec.kernel.g(t, spec.t0) : 0.0};
            for (double v : vals) {
                if (!std::isfinite(v)) {
                    c.pass = false;
                    c.violation = std::numeric_limits<double>::infinity();
                    c.note = "non-finite modulus at t=" + std::to_string(t);
                } else if (v < 0.0) {
                    c.violation = std::max(c.violation, -v);
                }
            }
        }
        if (c.violation > c.threshold) c.pass = false;
        report.add(std::move(c));
    }

    // (H1^f1) growth of the drift.
    if (spec.drift.eval) {
        CheckResult c{"drift_growth"};
        c.threshold = 1e-9;
        for (double t : times) {
            for (std::size_t j = 0; j < plan.space_samples; ++j) {
                const Vec x = rng.cube(d, radius);
                const double lhs = norm(spec.drift.eval(t, x));
                const double rhs = spec.drift.beta1(t) * (1.0 + norm(x));
                c.violation = std::max(c.violation, lhs - rhs);
            }
        }
        c.pass = c.violation <= c.threshold;
        report.add(std::move(c));
    }

    // (H2^f1) local Lipschitz property of the drift.
    if (spec.drift.eval && spec.drift.lip1) {
        CheckResult c{"drift_lipschitz"};
        c.threshold = 1e-9;
        const double eta = radius;
        for (double t : times) {
            for (std::size_t j = 0; j < plan.space_samples; ++j) {
                Vec x = rng.cube(d, eta / std::sqrt(static_cast<double>(d)));
                Vec y = rng.cube(d, eta / std::sqrt(static_cast<double>(d)));
                const double lhs = norm(spec.drift.eval(t, x) - spec.drift.eval(t, y));
                const double rhs = spec.drift.lip1(eta, t) * dist(x, y);
                c.violation = std::max(c.violation, lhs - rhs);
            }
        }
        c.pass = c.violation <= c.threshold;
        report.add(std::move(c));
    }

    // (H1^f2) growth of the kernel on points of the moving sets.
    if (spec.kernel.present()) {
        CheckResult c{"kernel_growth"};
        c.threshold = 1e-9;
        for (double t : times) {
            for (std::size_t j = 0; j < plan.space_samples; ++j) {
                const double s = rng.uniform(spec.t0, t);
                const Vec x = sample_in_set(set, rng, rng.uniform(spec.t0, spec.t_end), radius);
                const double lhs = norm(eval_kernel(spec.kernel, t, s, x));
                const double g = spec.kernel.g ? spec.kernel.g(t, s) : 0.0;
                const double rhs = g + (spec.kernel.beta2 ? spec.kernel.beta2(t) : 0.0) * norm(x);
                c.violation = std::max(c.violation, lhs - rhs);
            }
        }
        c.pass = c.violation <= c.threshold;
        report.add(std::move(c));
    }

    // (H2^f2) Lipschitz property of the kernel.
    if (spec.kernel.present() && spec.kernel.lip2) {
        CheckResult c{"kernel_lipschitz"};
        c.threshold = 1e-9;
        const double eta = radius;
        for (double t : times) {
            for (std::size_t j = 0; j < plan.space_samples; ++j) {
                const double s = rng.uniform(spec.t0, t);
                Vec x = rng.cube(d, eta / std::sqrt(static_cast<double>(d)));
                Vec y = rng.cube(d, eta / std::sqrt(static_cast<double>(d)));
                const double lhs = norm(eval_kernel(spec.kernel, t, s, x) - eval_kernel(spec.kernel, t, s, y));
                const double rhs = spec.kernel.lip2(eta, t) * dist(x, y);
                c.violation = std::max(c.violation, lhs - rhs);
            }
        }
        c.pass = c.violation <= c.threshold;
        report.add(std::move(c));
    }

    // (H2^F) boundedness: every returned member lies in gamma(t) B.
    {
        CheckResult c{"perturb_bounded"};
        c.threshold = eps_F;
        for (double t : times) {
            for (std::size_t j = 0; j < plan.space_samples; ++j) {
                const Vec x = rng.cube(d, radius);
                const Vec w = rng.cube(d, radius);
                const double lhs = norm(spec.perturb.nearest(t, x, w));
                c.violation = std::max(c.violation, lhs - spec.perturb.gamma(t));
            }
        }
        c.pass = c.violation <= c.threshold;
        report.add(std::move(c));
    }

    // (H1^F) Lipschitz transport of distances:
    // d(w, F(t,y)) <= d(w, F(t,x)) + k(t) ||x-y||.
    {
        CheckResult c{"perturb_transport"};
        c.threshold = eps_F;
        for (double t : times) {
            for (std::size_t j = 0; j < plan.space_samples; ++j) {
                const Vec x = rng.cube(d, radius);
                const Vec y = rng.cube(d, radius);
                const Vec w = rng.cube(d, radius);
                const double dy = dist(spec.perturb.nearest(t, y, w), w);
                const double dx = dist(spec.perturb.nearest(t, x, w), w);
                c.violation = std::max(c.violation, dy - dx - spec.perturb.lip_k(t) * dist(x, y));
            }
        }
        c.pass = c.violation <= c.threshold;
        report.add(std::move(c));
    }

    // (H1^C) absolutely continuous variation of the moving set.
    {
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i + 1 < times.size(); ++i)
            for (std::size_t j = i + 1; j < times.size(); ++j) pairs.emplace_back(times[i], times[j]);
        std::vector<Vec> pts;
        for (std::size_t j = 0; j < plan.space_samples; ++j) pts.push_back(rng.cube(d, radius));
        const VariationReport vrep = variation_check(set, pairs, pts);
        CheckResult c{"set_variation"};
        c.threshold = set.eps_geo;
        c.violation = vrep.max_violation;
        c.pass = vrep.violations == 0;
        report.add(std::move(c));
    }

    // (H2^C) prox-regularity, probed through hypomonotonicity of sampled
    // proximal normals.
    {
        CheckResult c{"set_hypomonotone"};
        c.threshold = set.eps_geo;
        std::size_t found = 0;
        for (double t : times) {
            Vec x1, v1;
            bool have_first = false;
            for (std::size_t j = 0; j < 4 * plan.space_samples && found < 2 * plan.space_samples; ++j) {
                const Vec y = rng.cube(d, radius);
                const double dy = set.distance(t, y);
                if (dy <= set.eps_geo || dy >= 0.9 * set.prox_const) continue;
                const Vec x = set.project_fn(t, y);
                Vec v = y - x;
                v *= 1.0 / norm(v);
                if (!have_first) {
                    x1 = x;
                    v1 = v;
                    have_first = true;
                    continue;
                }
                const double res = hypomonotonicity_residual(set, t, x1, v1, x, v);
                c.violation = std::max(c.violation, -res);
                ++found;
                have_first = false;
            }
        }
        if (found == 0) c.note = "no normal pairs sampled (set has empty boundary in range)";
        c.pass = c.violation <= c.threshold;
        report.add(std::move(c));
    }

    return report;
}

// ---------------------------------------------------------------------------
// Built-in fields
// ---------------------------------------------------------------------------

DriftField make_zero_drift() {
    DriftField f;
    f.beta1 = [](double) { return 0.0; };
    f.lip1 = [](double, double) { return 0.0; };
    return f;
}

DriftField make_constant_drift(Vec value) {
    const double b = norm(value);
    DriftField f;
    f.eval = [value](double, const Vec&) { return value; };
    f.beta1 = [b](double) { return b; };
    f.lip1 = [](double, double) { return 0.0; };
    return f;
}

DriftField make_linear_drift(double gain, std::function<Vec(double)> offset,
                             std::function<double(double)> offset_norm) {
    DriftField f;
    if (offset) {
        f.eval = [gain, offset](double t, const Vec& x) {
            Vec out = offset(t);
            axpy(out, gain, x);
            return out;
        };
        f.beta1 = [gain, offset_norm](double t) { return std::max(std::abs(gain), offset_norm(t)); };
    } else {
        f.eval = [gain](double, const Vec& x) { return gain * x; };
        f.beta1 = [gain](double) { return std::abs(gain); };
    }
    f.lip1 = [gain](double, double) { return std::abs(gain); };
    return f;
}

VolterraKernel make_zero_kernel() {
    VolterraKernel k;
    k.beta2 = [](double) { return 0.0; };
    k.lip2 = [](double, double) { return 0.0; };
    return k;
}

VolterraKernel make_memory_kernel() {
    VolterraKernel k;
    k.eval = [](double, double, const Vec& x) { return x; };
    k.beta2 = [](double) { return 1.0; };
    k.lip2 = [](double, double) { return 1.0; };
    return k;
}

VolterraKernel make_separable_kernel(double a_const, double b_const) {
    VolterraKernel k;
    k.separable = true;
    k.sep_a = [a_const](double) { return a_const; };
    k.sep_b = [b_const](double) { return b_const; };
    const double m = std::abs(a_const * b_const);
    k.beta2 = [m](double) { return m; };
    k.lip2 = [m](double, double) { return m; };
    return k;
}

PerturbationMap make_singleton_perturbation(Vec point, double gamma_override) {
    const double g = gamma_override >= 0.0 ? gamma_override : norm(point);
    PerturbationMap p;
    p.nearest = [point](double, const Vec&, const Vec&) { return point; };
    p.gamma = [g](double) { return g; };
    p.lip_k = [](double) { return 0.0; };
    return p;
}

PerturbationMap make_finite_perturbation(std::vector<Vec> points, double gamma_override) {
    if (points.empty()) throw ConfigError("finite perturbation: need at least one point");
    double gmax = 0.0;
    for (const Vec& p : points) gmax = std::max(gmax, norm(p));
    const double g = gamma_override >= 0.0 ? gamma_override : gmax;

    PerturbationMap p;
    p.nearest = [points](double, const Vec&, const Vec& w) {
        const Vec* best = &points.front();
        double best_d = dist(*best, w);
        for (std::size_t i = 1; i < points.size(); ++i) {
            const double di = dist(points[i], w);
            if (di < best_d || (di == best_d && lex_less(points[i], *best))) {
                best = &points[i];
                best_d = di;
            }
        }
        return *best;
    };
    p.gamma = [g](double) { return g; };
    p.lip_k = [](double) { return 0.0; };
    return p;
}

PerturbationMap make_ball_perturbation(Vec center, double radius, double gamma_override) {
    if (!(radius >= 0.0)) throw ConfigError("ball perturbation: radius must be nonnegative");
    const double g = gamma_override >= 0.0 ? gamma_override : norm(center) + radius;
    PerturbationMap p;
    p.nearest = [center, radius](double, const Vec&, const Vec& w) {
        const double r = dist(w, center);
        if (r <= radius) return w;
        Vec out = center;
        axpy(out, radius / r, w - center);
        return out;
    };
    p.gamma = [g](double) { return g; };
    p.lip_k = [](double) { return 0.0; };
    return p;
}

PerturbationMap make_two_point_lipschitz_perturbation() {
    PerturbationMap p;
    p.nearest = [](double, const Vec& x, const Vec& w) {
        const double lo = -1.0 - 0.5 * std::sin(x[0]);
        const double hi = 1.0 + 0.5 * std::cos(x[0]);
        const double dlo = std::abs(lo - w[0]);
        const double dhi = std::abs(hi - w[0]);
        if (dlo < dhi) return Vec{lo};
        if (dhi < dlo) return Vec{hi};
        return Vec{std::min(lo, hi)};  // tie: lexicographically smaller
    };
    p.gamma = [](double) { return 1.5; };
    p.lip_k = [](double) { return 0.5; };
    return p;
}

}  // namespace sweep
