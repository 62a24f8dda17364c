#pragma once

#include <cstddef>
#include <vector>

#include "sweep/bounds.hpp"
#include "sweep/stepper.hpp"

namespace sweep {

/// One row of the successive-approximation log. Quantities are indexed by
/// the iteration that produced trajectory zeta_{z_i}:
///   sup_y_delta       = sup_k || y_{i+1,k} - y_{i,k} ||
///   sup_z_delta       = sup_k || z_{i+1,k} - z_{i,k} ||   (after refinement)
///   factorial_bound   = theoretical majorant of sup_y_delta at t = T
///   selection_residual= sup_k distance of z_{i,k} from F(t_k, x_{i,k}).
struct IterationRecord {
    std::size_t iteration = 0;
    double sup_y_delta = 0.0;
    double sup_z_delta = 0.0;
    double factorial_bound = 0.0;
    double selection_residual = 0.0;
};

struct IterationReport {
    std::vector<IterationRecord> records;
    bool converged = false;
    std::size_t iterations_used = 0;
    double tol_requested = 0.0;
    double tol_used = 0.0;  // after the discretization-noise clamp
};

struct IterateOptions {
    double tol = 1e-6;
    std::size_t max_iter = 50;
    SolveOptions solve;
    CertificateOptions certificate;
    bool keep_trace = false;  // retain per-iteration y and z grids
};

struct IterateResult {
    GridFunction z;     // selection of the converged (or last) iterate
    Trajectory traj;    // zeta_z for that selection
    Trajectory q;       // unperturbed reference trajectory
    IterationReport report;
    BoundCertificate cert;
    std::vector<GridFunction> y_trace;  // y_1, y_2, ... (kept when requested)
    std::vector<GridFunction> z_trace;  // z_0, z_1, ...
};

/// Nearest-point refinement of a selection along a trajectory:
/// new_z_k = nearest(t_k, x_k, prev_z_k). By the Lipschitz transport of F,
/// ||new_z_k - prev_z_k|| is controlled by k(t_k) times the displacement of
/// the state between the two membership sets.
GridFunction refine_selection(const ProblemSpec& spec, const GridFunction& prev_z,
                              const GridFunction& current_x);

/// Max over nodes of the distance from z_k to F(t_k, x_k).
double selection_residual(const ProblemSpec& spec, const GridFunction& z, const Trajectory& traj);

/// Successive approximation: starting from the minimal-norm selection along
/// the unperturbed trajectory, alternate (solve with fixed selection) and
/// (refine the selection by nearest point along the new trajectory) until
/// successive shifted states agree within tol or the factorial majorant
/// falls below tol. tol is clamped below at 10 h (1 + sup gamma); grid
/// selections cannot resolve finer than the scheme error.
IterateResult iterate(const ProblemSpec& spec, const TimeGrid& grid,
                      const IterateOptions& opt = {});

}  // namespace sweep
