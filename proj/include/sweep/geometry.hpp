#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sweep/errors.hpp"
#include "sweep/vec.hpp"

namespace sweep {

inline constexpr double kInfiniteProx = std::numeric_limits<double>::infinity();

/// A moving set family C(t) exposed as a projection/distance oracle.
///
/// prox_const is the uniform prox-regularity constant R of every C(t);
/// +infinity encodes convexity. variation/variation_rate realize the
/// absolutely continuous variation bound
///   |d(y,C(t)) - d(y,C(s))| <= |upsilon(t) - upsilon(s)|.
struct MovingSetOracle {
    std::string name;
    std::size_t dim = 0;
    double prox_const = kInfiniteProx;
    double eps_geo = 1e-12;

    std::function<double(double)> variation;        // upsilon(t), monotone increasing
    std::function<double(double)> variation_rate;   // a.e. derivative, >= 0
    std::function<Vec(double, const Vec&)> project_fn;
    std::function<double(double, const Vec&)> distance_fn;

    bool convex() const { return prox_const == kInfiniteProx; }
    double distance(double t, const Vec& y) const { return distance_fn(t, y); }
};

/// Nearest point of C(t) to y. Requires distance(t,y) < prox_const, the
/// region on which prox-regularity makes the projection single-valued.
/// Throws RegionViolation otherwise.
Vec project(const MovingSetOracle& set, double t, const Vec& y);

/// Proximal-normal membership test: v (with ||v|| <= 1) is a proximal normal
/// to C(t) at x iff x is its own projection after stepping along v, i.e.
/// ||project(t, x + step*v) - x|| <= tol. Requires x in C(t) within eps_geo
/// and 0 < step < prox_const.
bool normal_cone_membership(const MovingSetOracle& set, double t, const Vec& x, const Vec& v,
                            double step, double tol = 1e-9);

/// Hypomonotonicity residual of a pair of normals:
///   <v2 - v1, x2 - x1> + (1/2)((||v1|| + ||v2||)/R) ||x2 - x1||^2.
/// Nonnegative for an R-prox-regular set; the quadratic term is omitted for
/// convex sets (R = infinity). Points must lie in C(t) and directions must
/// pass the normal-cone membership test.
double hypomonotonicity_residual(const MovingSetOracle& set, double t, const Vec& x1,
                                 const Vec& v1, const Vec& x2, const Vec& v2);

/// Result of sampling the absolutely-continuous-variation hypothesis.
struct VariationReport {
    double max_violation = 0.0;  // max of |d(t,y)-d(s,y)| - |ups(t)-ups(s)| over samples
    std::size_t samples = 0;
    std::size_t violations = 0;  // samples with violation > eps_geo
};

/// Samples |distance(t,y) - distance(s,y)| - |upsilon(t) - upsilon(s)| over
/// the given (s,t) pairs and probe points.
VariationReport variation_check(const MovingSetOracle& set,
                                const std::vector<std::pair<double, double>>& sample_times,
                                const std::vector<Vec>& sample_points);

// ---------------------------------------------------------------------------
// Built-in oracles (closed-form projections).
// ---------------------------------------------------------------------------

/// C(t) = { x : <normal, x> >= offset0 + offset_rate * t }. Convex.
MovingSetOracle make_halfspace(Vec normal, double offset0, double offset_rate);

/// Translating box C(t) = [lo + t*velocity, hi + t*velocity]. Convex.
MovingSetOracle make_box(Vec lo, Vec hi, Vec velocity);

/// 1D interval [lo + p(t), hi + p(t)] with a supplied shift path p and its
/// a.e. slope bound (used as variation rate). Convex.
MovingSetOracle make_interval(double lo, double hi, std::function<double(double)> shift,
                              double slope_bound);

/// Moving closed ball B[center0 + t*velocity, radius]. Convex.
MovingSetOracle make_ball(Vec center0, Vec velocity, double radius);

/// Complement of the moving open ball, { x : ||x - c(t)|| >= radius }.
/// Nonconvex, R = radius. Projection at the exact center is non-unique; the
/// oracle deterministically returns c + radius*e1 there, but that input has
/// distance = R and is rejected by project().
MovingSetOracle make_ball_complement(Vec center0, Vec velocity, double radius);

/// Static annulus { x : r_inner <= ||x - center|| <= r_outer }. R = r_inner.
MovingSetOracle make_annulus(Vec center, double r_inner, double r_outer);

/// Whole space (free dynamics): distance 0 everywhere. Convex.
MovingSetOracle make_free_space(std::size_t dim);

}  // namespace sweep
