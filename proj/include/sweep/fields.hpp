#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sweep/geometry.hpp"
#include "sweep/vec.hpp"

namespace sweep {

/// Single-valued drift f1(t,x) with its declared growth and Lipschitz moduli:
///   ||f1(t,x)||          <= beta1(t) (1 + ||x||)
///   ||f1(t,x)-f1(t,y)||  <= lip1(eta,t) ||x-y||   for x,y in B[0,eta].
struct DriftField {
    std::function<Vec(double, const Vec&)> eval;  // null means f1 == 0
    std::function<double(double)> beta1;
    std::function<double(double, double)> lip1;  // (eta, t)
};

/// Volterra kernel f2(t,s,x) on Q = { s <= t } with moduli
///   ||f2(t,s,x)|| <= g(t,s) + beta2(t)||x||,
///   ||f2(t,s,x)-f2(t,s,y)|| <= lip2(eta,t)||x-y||.
/// A kernel may declare the separable form f2(t,s,x) = a(t) b(s) x, which the
/// stepper exploits with a running-sum fast path.
struct VolterraKernel {
    std::function<Vec(double, double, const Vec&)> eval;  // null means f2 == 0
    bool separable = false;
    std::function<double(double)> sep_a;  // only when separable
    std::function<double(double)> sep_b;
    std::function<double(double, double)> g;  // null means g == 0
    std::function<double(double)> beta2;
    std::function<double(double, double)> lip2;  // (eta, t)

    bool present() const { return static_cast<bool>(eval) || separable; }
};

/// Checked kernel evaluation; throws KernelDomain when s > t.
Vec eval_kernel(const VolterraKernel& kernel, double t, double s, const Vec& x);

/// Set-valued perturbation F(t,x), exposed only through a deterministic
/// nearest-point oracle: nearest(t,x,w) is the point of F(t,x) closest to w.
struct PerturbationMap {
    std::function<Vec(double, const Vec&, const Vec&)> nearest;
    std::function<double(double)> gamma;  // F(t,x) subset of gamma(t) B
    std::function<double(double)> lip_k;  // Hausdorff-Lipschitz modulus k(t)
    double eps_F = 1e-10;
};

/// F == {0}: the unperturbed problem.
PerturbationMap make_zero_perturbation(std::size_t dim);

/// Full problem instance on [t0, t_end].
struct ProblemSpec {
    double t0 = 0.0;
    double t_end = 1.0;
    Vec x0;
    Vec q0;      // reference initial point; defaults to x0
    double r0 = 0.0;  // must satisfy r0 >= ||x0 - q0||
    MovingSetOracle set;
    DriftField drift;
    VolterraKernel kernel;
    PerturbationMap perturb;

    std::size_t dim() const { return x0.size(); }
};

/// Drift evaluation helper (zero vector when absent).
Vec eval_drift(const ProblemSpec& spec, double t, const Vec& x);

/// One validated hypothesis: sampled max violation against its threshold.
struct CheckResult {
    std::string name;
    bool pass = true;
    double violation = 0.0;
    double threshold = 0.0;
    std::string note;

    CheckResult() = default;
    explicit CheckResult(std::string check_name) : name(std::move(check_name)) {}
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool pass = true;

    void add(CheckResult c) {
        pass = pass && c.pass;
        checks.push_back(std::move(c));
    }
};

/// Deterministic sampling plan for hypothesis validation.
struct SamplingPlan {
    std::size_t time_samples = 24;
    std::size_t space_samples = 8;
    double radius = 0.0;  // 0 means auto (scaled from x0 and the set motion)
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Sample-based validation of the hypothesis bundles carried by the spec.
/// Checks are necessary conditions only. Throws InfeasibleInitialPoint when
/// x0 (or q0) lies outside C(t0).
ValidationReport validate(const ProblemSpec& spec, const SamplingPlan& plan);

/// Nearest point of F(t,x) to the origin (the minimal-norm selection).
Vec minimal_norm_selection(const PerturbationMap& perturb, double t, const Vec& x);

// ---------------------------------------------------------------------------
// Built-in fields
// ---------------------------------------------------------------------------

DriftField make_zero_drift();

/// f1(t,x) = value.
DriftField make_constant_drift(Vec value);

/// f1(t,x) = gain*x + offset(t) with declared moduli
/// beta1(t) = max(|gain|, ||offset(t)||), lip1 = |gain|.
DriftField make_linear_drift(double gain, std::function<Vec(double)> offset,
                             std::function<double(double)> offset_norm);

VolterraKernel make_zero_kernel();

/// f2(t,s,x) = x (unit memory kernel); evaluated through the generic path.
VolterraKernel make_memory_kernel();

/// f2(t,s,x) = a_const * b_const * x, declared separable (fast path).
VolterraKernel make_separable_kernel(double a_const, double b_const);

/// F = {point}.
PerturbationMap make_singleton_perturbation(Vec point, double gamma_override = -1.0);

/// F = finite set of points; nearest ties break toward the lexicographically
/// smallest candidate.
PerturbationMap make_finite_perturbation(std::vector<Vec> points, double gamma_override = -1.0);

/// F = B[center, radius], independent of x.
PerturbationMap make_ball_perturbation(Vec center, double radius, double gamma_override = -1.0);

/// 1D state-dependent pair F(t,x) = { -1 - sin(x)/2,  1 + cos(x)/2 } with
/// k(t) = 1/2 and gamma(t) = 3/2.
PerturbationMap make_two_point_lipschitz_perturbation();

/// True when a < b lexicographically (used by finite-set tie-breaking).
bool lex_less(const Vec& a, const Vec& b);

}  // namespace sweep
