#pragma once

#include <cstddef>
#include <functional>
#include <utility>

#include "sweep/fields.hpp"
#include "sweep/grid.hpp"

namespace sweep {

using TimeFn = std::function<double(double)>;

/// Composite-trapezoid integral of f over the grid nodes.
double integrate(const TimeFn& f, const TimeGrid& quad);

/// Cumulative composite-trapezoid integral; result[i] = integral up to node i.
ScalarGrid cumulative_integral(const TimeFn& f, const TimeGrid& quad);

/// Linear Gronwall bound: given
///   rho'(t) <= a(t) + b1(t) rho(t) + b2(t) Int_{t0}^t rho,
/// returns the dominating function
///   t -> rho0 exp(Int (b+1)) + Int_{t0}^t a(s) exp(Int_s^t (b+1)) ds,
/// with b = max(b1, b2) pointwise. Inputs must be nonnegative.
ScalarGrid gronwall_linear(double rho0, const TimeFn& a, const TimeFn& b1, const TimeFn& b2,
                           const TimeGrid& quad);

/// Square-root Gronwall bound: given
///   rho'(t) <= K1 rho + K2 sqrt(rho) + K3 sqrt(rho) Int sqrt(rho),
/// returns the dominating function for sqrt(rho):
///   t -> sqrt(rho0) exp(Int (K+1)) + Int (K2/2) exp(Int_s^t (K+1)) ds,
/// with K = max(K1/2, K3/2) pointwise.
ScalarGrid gronwall_sqrt(double rho0, const TimeFn& K1, const TimeFn& K2, const TimeFn& K3,
                         const TimeGrid& quad);

/// Smallest admissible a priori sup-norm bound for trajectories of the problem:
///   eta = mu0 Psi + Psi Int_{t0}^{T} ( |ups'(s)| + 2(beta1+gamma)(s)
///                                      + 2 Int_{t0}^{T} g(s,tau) dtau ) ds,
/// with mu0 = max(||x0||, ||q0||), Psi = exp(Int (b+1)) and
/// b(t) = 2 max((beta1+gamma)(t), beta2(t)). Also returns Psi and the b grid.
struct EtaResult {
    double eta = 0.0;
    double Psi = 1.0;
    ScalarGrid b;
};
EtaResult compute_eta(const ProblemSpec& spec, const TimeGrid& quad);

/// Velocity majorant phi(t) = |ups'(t)| + (1+eta)(beta1+gamma)(t)
///                          + Int_{t0}^t g(t,s) ds + eta (T-t0) beta2(t).
ScalarGrid compute_phi_t(const ProblemSpec& spec, double eta, const TimeGrid& quad);

/// Deviation constant Phi = exp(Int (K+1)) with
/// K(t) = max( lip1(eta,t) + phi(t)/R, lip2(eta,t) );
/// the phi/R term vanishes for convex sets (R = infinity).
struct PhiResult {
    double Phi = 1.0;
    ScalarGrid K;
};
PhiResult compute_Phi(const ProblemSpec& spec, double eta, const ScalarGrid& phi,
                      const TimeGrid& quad);

/// Scalar comparison solution r of r' = gamma + Phi k r, r(t0) = r0, via its
/// closed form r(t) = r0 exp(c(t)) + Int exp(c(t)-c(s)) gamma(s) ds with
/// c(t) = Phi Int_{t0}^t k. Throws R0TooSmall when r0 < ||x0-q0|| - 1e-12.
struct RGrids {
    ScalarGrid c;
    ScalarGrid r;
    ScalarGrid rdot;
};
RGrids compute_r(const ProblemSpec& spec, double Phi, double r0, const TimeGrid& quad);

/// Every closed-form a priori quantity of the problem in one bundle.
struct BoundCertificate {
    double eta = 0.0;
    double Psi = 1.0;
    double Phi = 1.0;
    double r0 = 0.0;
    ScalarGrid b;      // 2 max(beta1+gamma, beta2)
    ScalarGrid K;
    ScalarGrid phi;    // velocity majorant phi(t)
    ScalarGrid c;
    ScalarGrid r;
    ScalarGrid rdot;

    /// Additive discretization slack used whenever a continuous-time
    /// inequality is checked against grid quantities: 10 (1 + sup phi) h.
    double slack(double h) const { return 10.0 * (1.0 + phi.max()) * h; }
};

struct CertificateOptions {
    std::size_t quad_multiplier = 4;   // quadrature density vs solver grid
    std::size_t min_quad_steps = 256;
};

BoundCertificate compute_certificate(const ProblemSpec& spec, double r0,
                                     const TimeGrid& solver_grid,
                                     const CertificateOptions& opt = {});

/// Successive-approximation majorant (the factorial decay bound):
///   Phi ( r0 c(t)^i / i! + Int_{t0}^t ([c(t)-c(s)]^i / i!) gamma(s) ds ).
double factorial_bound(const BoundCertificate& cert, const ProblemSpec& spec, std::size_t i,
                       double t);

/// Numeric check of the kernel-iteration identity
///   Int Phi k(s) Int ([c(s)-c(tau)]^{i-1}/(i-1)!) gamma(tau) dtau ds
///     = Int ([c(t)-c(s)]^i / i!) gamma(s) ds,   i >= 1.
/// Returns both sides evaluated by nested quadrature.
std::pair<double, double> fubini_identity_check(const ProblemSpec& spec, double Phi,
                                                std::size_t i, double t, const TimeGrid& quad);

/// x^i / i!, evaluated in log space for large i.
double power_over_factorial(double x, std::size_t i);

}  // namespace sweep
