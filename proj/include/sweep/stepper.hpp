#pragma once

#include <cstddef>
#include <vector>

#include "sweep/bounds.hpp"
#include "sweep/fields.hpp"
#include "sweep/grid.hpp"

namespace sweep {

/// Quadrature rule for the Volterra memory term.
enum class QuadRule {
    LeftRectangle,  ///< matches the catching-up order; default
    Trapezoid,      ///< optional, for smooth kernels
};

struct SolveOptions {
    QuadRule quadrature = QuadRule::LeftRectangle;
};

/// Discrete solution of the fixed-selection problem.
struct Trajectory {
    GridFunction x;         // state, piecewise-linear
    GridFunction xdot;      // backward differences at the right node
    GridFunction z;         // selection used by the solve
    GridFunction volterra;  // accumulated memory term per node
    std::vector<double> residuals;  // distance(t_k, x_k)

    const TimeGrid& grid() const { return x.grid; }
    std::size_t dim() const { return x.dim(); }
};

/// Memory term at node k: the composite quadrature of
///   Int_{t0}^{t_k} f2(t_k, s, x(s)) ds
/// over the prefix nodes (left-rectangle by default; zero when k == 0).
Vec volterra_term(const ProblemSpec& spec, const GridFunction& x_prefix, std::size_t k,
                  QuadRule rule = QuadRule::LeftRectangle);

/// Catching-up scheme for the fixed-selection inclusion: one projection per
/// step,
///   x_{k+1} = project(t_{k+1}, x_k - h_k [ f1(t_k,x_k) + volterra_k + z_k ]).
/// Throws RegionViolation when a predictor leaves the uniqueness region of
/// the prox-regular sets (callers may halve h and retry).
Trajectory solve_fixed_selection(const ProblemSpec& spec, const GridFunction& z,
                                 const TimeGrid& grid, const SolveOptions& opt = {});

/// Reference trajectory: the same scheme with z == 0 started from q0.
Trajectory solve_unperturbed(const ProblemSpec& spec, const TimeGrid& grid,
                             const SolveOptions& opt = {});

/// Node-wise audit of the two-selection deviation inequality
///   ||x1_k - x2_k|| <= Phi ( ||x1_0 - x2_0|| + sum_{j<k} h_j ||z1_j - z2_j|| )
///                      + slack(h).
struct DeviationReport {
    double max_ratio = 0.0;      // max over nodes of lhs / rhs
    double max_violation = 0.0;  // max over nodes of lhs - rhs
    std::size_t violations = 0;
    std::size_t nodes = 0;
};
DeviationReport deviation_check(const Trajectory& a, const Trajectory& b,
                                const BoundCertificate& cert);

}  // namespace sweep
