#include "sweep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace sweep {

namespace {

std::string fmt_point(const Vec& y) {
    std::string s = "(";
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(y[i]);
    }
    return s + ")";
}

}  // namespace

Vec project(const MovingSetOracle& set, double t, const Vec& y) {
    const double d = set.distance(t, y);
    if (d >= set.prox_const) {
        throw RegionViolation(set.name + ": projection of " + fmt_point(y) + " at t=" +
                              std::to_string(t) + " has distance " + std::to_string(d) +
                              " >= prox constant");
    }
    return set.project_fn(t, y);
}

bool normal_cone_membership(const MovingSetOracle& set, double t, const Vec& x, const Vec& v,
                            double step, double tol) {
    if (set.distance(t, x) > set.eps_geo) {
        throw PointNotInSet(set.name + ": membership test at a point outside C(t), distance=" +
                            std::to_string(set.distance(t, x)));
    }
    if (!(step > 0.0) || step >= set.prox_const) {
        throw Error(set.name + ": membership step must lie in (0, prox_const)");
    }
    const double nv = norm(v);
    if (nv == 0.0) return true;  // 0 is in every normal cone
    Vec probe = x;
    axpy(probe, step, v);
    const Vec back = project(set, t, probe);
    return dist(back, x) <= tol;
}

double hypomonotonicity_residual(const MovingSetOracle& set, double t, const Vec& x1,
                                 const Vec& v1, const Vec& x2, const Vec& v2) {
    for (const Vec* x : {&x1, &x2}) {
        if (set.distance(t, *x) > set.eps_geo)
            throw PointNotInSet(set.name + ": hypomonotonicity residual needs points of C(t)");
    }
    // Membership is checked on normalized directions; the step stays inside
    // the uniqueness region.
    const double step = set.convex() ? 1.0 : 0.5 * set.prox_const;
    for (const auto& [x, v] : {std::pair<const Vec&, const Vec&>{x1, v1}, {x2, v2}}) {
        const double nv = norm(v);
        if (nv == 0.0) continue;
        if (!normal_cone_membership(set, t, x, (1.0 / nv) * v, step))
            throw NotANormal(set.name + ": direction fails the proximal-normal test");
    }
    const Vec dx = x2 - x1;
    double residual = dot(v2 - v1, dx);
    if (!set.convex()) {
        residual += 0.5 * ((norm(v1) + norm(v2)) / set.prox_const) * dot(dx, dx);
    }
    return residual;
}

VariationReport variation_check(const MovingSetOracle& set,
                                const std::vector<std::pair<double, double>>& sample_times,
                                const std::vector<Vec>& sample_points) {
    VariationReport rep;
    for (const auto& [s, t] : sample_times) {
        const double dv = std::abs(set.variation(t) - set.variation(s));
        for (const Vec& y : sample_points) {
            const double viol = std::abs(set.distance(t, y) - set.distance(s, y)) - dv;
            rep.max_violation = std::max(rep.max_violation, viol);
            if (viol > set.eps_geo) ++rep.violations;
            ++rep.samples;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Built-ins
// ---------------------------------------------------------------------------

MovingSetOracle make_halfspace(Vec normal, double offset0, double offset_rate) {
    const double nn = norm(normal);
    if (!(nn > 0.0)) throw ConfigError("halfspace: normal must be nonzero");
    Vec n = (1.0 / nn) * normal;
    const double a0 = offset0 / nn, a1 = offset_rate / nn;

    MovingSetOracle set;
    set.name = "halfspace";
    set.dim = n.size();
    set.prox_const = kInfiniteProx;
    set.variation = [a1](double t) { return std::abs(a1) * t; };
    set.variation_rate = [a1](double) { return std::abs(a1); };
    set.distance_fn = [n, a0, a1](double t, const Vec& y) {
        return std::max(0.0, a0 + a1 * t - dot(n, y));
    };
    set.project_fn = [n, a0, a1](double t, const Vec& y) {
        const double gap = a0 + a1 * t - dot(n, y);
        if (gap <= 0.0) return y;
        Vec out = y;
        axpy(out, gap, n);
        return out;
    };
    return set;
}

MovingSetOracle make_box(Vec lo, Vec hi, Vec velocity) {
    if (lo.size() != hi.size() || lo.size() != velocity.size())
        throw ConfigError("box: lo/hi/velocity dimensions disagree");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] <= hi[i])) throw ConfigError("box: lo must not exceed hi");
    const double rate = norm(velocity);

    MovingSetOracle set;
    set.name = "box";
    set.dim = lo.size();
    set.prox_const = kInfiniteProx;
    set.variation = [rate](double t) { return rate * t; };
    set.variation_rate = [rate](double) { return rate; };
    auto clamp_pt = [lo, hi, velocity](double t, const Vec& y) {
        Vec out = y;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double a = lo[i] + t * velocity[i];
            const double b = hi[i] + t * velocity[i];
            out[i] = std::min(std::max(y[i], a), b);
        }
        return out;
    };
    set.project_fn = clamp_pt;
    set.distance_fn = [clamp_pt](double t, const Vec& y) { return dist(clamp_pt(t, y), y); };
    return set;
}

MovingSetOracle make_interval(double lo, double hi, std::function<double(double)> shift,
                              double slope_bound) {
    if (!(lo <= hi)) throw ConfigError("interval: lo must not exceed hi");
    const double rate = std::abs(slope_bound);

    MovingSetOracle set;
    set.name = "interval";
    set.dim = 1;
    set.prox_const = kInfiniteProx;
    set.variation = [rate](double t) { return rate * t; };
    set.variation_rate = [rate](double) { return rate; };
    set.project_fn = [lo, hi, shift](double t, const Vec& y) {
        const double p = shift(t);
        return Vec{std::min(std::max(y[0], lo + p), hi + p)};
    };
    set.distance_fn = [lo, hi, shift](double t, const Vec& y) {
        const double p = shift(t);
        return std::max({0.0, lo + p - y[0], y[0] - (hi + p)});
    };
    return set;
}

MovingSetOracle make_ball(Vec center0, Vec velocity, double radius) {
    if (center0.size() != velocity.size()) throw ConfigError("ball: center/velocity dimensions disagree");
    if (!(radius > 0.0)) throw ConfigError("ball: radius must be positive");
    const double rate = norm(velocity);

    MovingSetOracle set;
    set.name = "ball";
    set.dim = center0.size();
    set.prox_const = kInfiniteProx;
    set.variation = [rate](double t) { return rate * t; };
    set.variation_rate = [rate](double) { return rate; };
    auto center = [center0, velocity](double t) {
        Vec c = center0;
        axpy(c, t, velocity);
        return c;
    };
    set.distance_fn = [center, radius](double t, const Vec& y) {
        return std::max(0.0, dist(y, center(t)) - radius);
    };
    set.project_fn = [center, radius](double t, const Vec& y) {
        const Vec c = center(t);
        const double r = dist(y, c);
        if (r <= radius) return y;
        Vec out = c;
        axpy(out, radius / r, y - c);
        return out;
    };
    return set;
}

MovingSetOracle make_ball_complement(Vec center0, Vec velocity, double radius) {
    if (center0.size() != velocity.size())
        throw ConfigError("ball_complement: center/velocity dimensions disagree");
    if (!(radius > 0.0)) throw ConfigError("ball_complement: radius must be positive");
    const double rate = norm(velocity);

    MovingSetOracle set;
    set.name = "ball_complement";
    set.dim = center0.size();
    set.prox_const = radius;
    set.variation = [rate](double t) { return rate * t; };
    set.variation_rate = [rate](double) { return rate; };
    auto center = [center0, velocity](double t) {
        Vec c = center0;
        axpy(c, t, velocity);
        return c;
    };
    set.distance_fn = [center, radius](double t, const Vec& y) {
        return std::max(0.0, radius - dist(y, center(t)));
    };
    set.project_fn = [center, radius](double t, const Vec& y) {
        const Vec c = center(t);
        const double r = dist(y, c);
        if (r >= radius) return y;
        Vec out = c;
        if (r == 0.0) {
            out[0] += radius;  // deterministic tie-break along the first axis
            return out;
        }
        axpy(out, radius / r, y - c);
        return out;
    };
    return set;
}

MovingSetOracle make_annulus(Vec center, double r_inner, double r_outer) {
    if (!(0.0 < r_inner && r_inner < r_outer)) throw ConfigError("annulus: need 0 < r_inner < r_outer");

    MovingSetOracle set;
    set.name = "annulus";
    set.dim = center.size();
    set.prox_const = r_inner;
    set.variation = [](double) { return 0.0; };
    set.variation_rate = [](double) { return 0.0; };
    set.distance_fn = [center, r_inner, r_outer](double, const Vec& y) {
        const double r = dist(y, center);
        if (r < r_inner) return r_inner - r;
        if (r > r_outer) return r - r_outer;
        return 0.0;
    };
    set.project_fn = [center, r_inner, r_outer](double, const Vec& y) {
        const double r = dist(y, center);
        if (r >= r_inner && r <= r_outer) return y;
        Vec out = center;
        if (r == 0.0) {
            out[0] += r_inner;
            return out;
        }
        axpy(out, (r < r_inner ? r_inner : r_outer) / r, y - center);
        return out;
    };
    return set;
}

MovingSetOracle make_free_space(std::size_t dim) {
    MovingSetOracle set;
    set.name = "free";
    set.dim = dim;
    set.prox_const = kInfiniteProx;
    set.variation = [](double) { return 0.0; };
    set.variation_rate = [](double) { return 0.0; };
    set.project_fn = [](double, const Vec& y) { return y; };
    set.distance_fn = [](double, const Vec&) { return 0.0; };
    return set;
}

}  // namespace sweep
