#include "sweep/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace sweep {

double integrate(const TimeFn& f, const TimeGrid& quad) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < quad.node_count(); ++k) {
        acc += 0.5 * quad.step(k) * (f(quad.nodes[k]) + f(quad.nodes[k + 1]));
    }
    return acc;
}

ScalarGrid cumulative_integral(const TimeFn& f, const TimeGrid& quad) {
    ScalarGrid out;
    out.t = quad.nodes;
    out.v.resize(quad.node_count());
    out.v[0] = 0.0;
    double prev = f(quad.nodes[0]);
    for (std::size_t k = 1; k < quad.node_count(); ++k) {
        const double cur = f(quad.nodes[k]);
        out.v[k] = out.v[k - 1] + 0.5 * quad.step(k - 1) * (prev + cur);
        prev = cur;
    }
    return out;
}

namespace {

void require_nonnegative(double rho0, const TimeFn& f1, const TimeFn& f2, const TimeFn& f3,
                         const TimeGrid& quad) {
    if (rho0 < 0.0) throw NegativeInput("gronwall bound: rho0 must be nonnegative");
    for (double t : quad.nodes) {
        if (f1(t) < 0.0 || f2(t) < 0.0 || f3(t) < 0.0)
            throw NegativeInput("gronwall bound: coefficient functions must be nonnegative");
    }
}

/// exp(B(t)) * ( y0 + Int a(s) exp(-B(s)) ds ) sampled on the quadrature
/// grid; shared kernel of both Gronwall forms and of compute_r.
ScalarGrid exponential_comparison(double y0, const TimeFn& a, const ScalarGrid& B) {
    ScalarGrid out;
    out.t = B.t;
    out.v.resize(B.t.size());
    double inner = 0.0;  // cumulative trapezoid of a(s) exp(-B(s))
    double prev = a(B.t[0]) * std::exp(-B.v[0]);
    out.v[0] = std::exp(B.v[0]) * y0;
    for (std::size_t k = 1; k < B.t.size(); ++k) {
        const double cur = a(B.t[k]) * std::exp(-B.v[k]);
        inner += 0.5 * (B.t[k] - B.t[k - 1]) * (prev + cur);
        prev = cur;
        out.v[k] = std::exp(B.v[k]) * (y0 + inner);
    }
    return out;
}

}  // namespace

ScalarGrid gronwall_linear(double rho0, const TimeFn& a, const TimeFn& b1, const TimeFn& b2,
                           const TimeGrid& quad) {
    require_nonnegative(rho0, a, b1, b2, quad);
    auto bp1 = [&](double t) { return std::max(b1(t), b2(t)) + 1.0; };
    const ScalarGrid B = cumulative_integral(bp1, quad);
    return exponential_comparison(rho0, a, B);
}

ScalarGrid gronwall_sqrt(double rho0, const TimeFn& K1, const TimeFn& K2, const TimeFn& K3,
                         const TimeGrid& quad) {
    require_nonnegative(rho0, K1, K2, K3, quad);
    auto Kp1 = [&](double t) { return std::max(0.5 * K1(t), 0.5 * K3(t)) + 1.0; };
    const ScalarGrid B = cumulative_integral(Kp1, quad);
    auto half_K2 = [&](double t) { return 0.5 * K2(t); };
    return exponential_comparison(std::sqrt(rho0), half_K2, B);
}

EtaResult compute_eta(const ProblemSpec& spec, const TimeGrid& quad) {
    const auto& drift = spec.drift;
    const auto& kernel = spec.kernel;
    auto beta1 = [&](double t) { return drift.beta1 ? drift.beta1(t) : 0.0; };
    auto beta2 = [&](double t) { return kernel.beta2 ? kernel.beta2(t) : 0.0; };
    auto gamma = [&](double t) { return spec.perturb.gamma(t); };

    EtaResult res;
    res.b.t = quad.nodes;
    res.b.v.resize(quad.node_count());
    for (std::size_t k = 0; k < quad.node_count(); ++k) {
        const double t = quad.nodes[k];
        res.b.v[k] = 2.0 * std::max(beta1(t) + gamma(t), beta2(t));
    }
    res.Psi = std::exp(integrate([&](double t) { return res.b.at(t) + 1.0; }, quad));

    auto inner_g = [&](double s) {
        if (!kernel.g) return 0.0;
        return integrate([&](double tau) { return kernel.g(s, tau); }, quad);
    };
    const double mass = integrate(
        [&](double s) {
            return std::abs(spec.set.variation_rate(s)) + 2.0 * (beta1(s) + gamma(s)) +
                   2.0 * inner_g(s);
        },
        quad);

    const double mu0 = std::max(norm(spec.x0), norm(spec.q0));
    res.eta = mu0 * res.Psi + res.Psi * mass;
    return res;
}

ScalarGrid compute_phi_t(const ProblemSpec& spec, double eta, const TimeGrid& quad) {
    const auto& drift = spec.drift;
    const auto& kernel = spec.kernel;
    const double span = spec.t_end - spec.t0;

    ScalarGrid phi;
    phi.t = quad.nodes;
    phi.v.resize(quad.node_count());
    for (std::size_t k = 0; k < quad.node_count(); ++k) {
        const double t = quad.nodes[k];
        double g_int = 0.0;
        if (kernel.g) {
            // Int_{t0}^{t} g(t,s) ds on the quadrature nodes up to t.
            double acc = 0.0;
            for (std::size_t j = 0; j + 1 <= k; ++j) {
                acc += 0.5 * quad.step(j) * (kernel.g(t, quad.nodes[j]) + kernel.g(t, quad.nodes[j + 1]));
            }
            g_int = acc;
        }
        const double b1g = (drift.beta1 ? drift.beta1(t) : 0.0) + spec.perturb.gamma(t);
        const double b2 = kernel.beta2 ? kernel.beta2(t) : 0.0;
        phi.v[k] = std::abs(spec.set.variation_rate(t)) + (1.0 + eta) * b1g + g_int + eta * span * b2;
    }
    return phi;
}

PhiResult compute_Phi(const ProblemSpec& spec, double eta, const ScalarGrid& phi,
                      const TimeGrid& quad) {
    const auto& drift = spec.drift;
    const auto& kernel = spec.kernel;

    PhiResult res;
    res.K.t = quad.nodes;
    res.K.v.resize(quad.node_count());
    for (std::size_t k = 0; k < quad.node_count(); ++k) {
        const double t = quad.nodes[k];
        const double l1 = drift.lip1 ? drift.lip1(eta, t) : 0.0;
        const double l2 = kernel.lip2 ? kernel.lip2(eta, t) : 0.0;
        const double curvature = spec.set.convex() ? 0.0 : phi.v[k] / spec.set.prox_const;
        res.K.v[k] = std::max(l1 + curvature, l2);
    }
    res.Phi = std::exp(integrate([&](double t) { return res.K.at(t) + 1.0; }, quad));
    return res;
}

RGrids compute_r(const ProblemSpec& spec, double Phi, double r0, const TimeGrid& quad) {
    if (r0 < dist(spec.x0, spec.q0) - 1e-12) {
        throw R0TooSmall("r0=" + std::to_string(r0) + " is below ||x0-q0||=" +
                         std::to_string(dist(spec.x0, spec.q0)));
    }
    auto gamma = [&](double t) { return spec.perturb.gamma(t); };
    auto k_mod = [&](double t) { return spec.perturb.lip_k(t); };

    RGrids out;
    out.c = cumulative_integral(k_mod, quad);
    for (double& v : out.c.v) v *= Phi;
    out.r = exponential_comparison(r0, gamma, out.c);
    out.rdot.t = quad.nodes;
    out.rdot.v.resize(quad.node_count());
    for (std::size_t k = 0; k < quad.node_count(); ++k) {
        out.rdot.v[k] = gamma(quad.nodes[k]) + Phi * k_mod(quad.nodes[k]) * out.r.v[k];
    }
    return out;
}

BoundCertificate compute_certificate(const ProblemSpec& spec, double r0,
                                     const TimeGrid& solver_grid, const CertificateOptions& opt) {
    const std::size_t steps =
        std::max(opt.min_quad_steps, opt.quad_multiplier * solver_grid.step_count());
    const TimeGrid quad = TimeGrid::uniform(spec.t0, spec.t_end, steps);

    BoundCertificate cert;
    cert.r0 = r0;
    EtaResult eta = compute_eta(spec, quad);
    cert.eta = eta.eta;
    cert.Psi = eta.Psi;
    cert.b = std::move(eta.b);
    cert.phi = compute_phi_t(spec, cert.eta, quad);
    PhiResult phi_res = compute_Phi(spec, cert.eta, cert.phi, quad);
    cert.Phi = phi_res.Phi;
    cert.K = std::move(phi_res.K);
    RGrids rg = compute_r(spec, cert.Phi, r0, quad);
    cert.c = std::move(rg.c);
    cert.r = std::move(rg.r);
    cert.rdot = std::move(rg.rdot);
    return cert;
}

double power_over_factorial(double x, std::size_t i) {
    if (i == 0) return 1.0;
    if (x <= 0.0) return 0.0;
    if (i <= 20) {
        double acc = 1.0;
        for (std::size_t j = 1; j <= i; ++j) acc *= x / static_cast<double>(j);
        return acc;
    }
    const double di = static_cast<double>(i);
    return std::exp(di * std::log(x) - std::lgamma(di + 1.0));
}

double factorial_bound(const BoundCertificate& cert, const ProblemSpec& spec, std::size_t i,
                       double t) {
    const double ct = cert.c.at(t);
    double integral = 0.0;
    const auto& nodes = cert.c.t;
    double prev = power_over_factorial(ct - cert.c.v[0], i) * spec.perturb.gamma(nodes[0]);
    for (std::size_t k = 1; k < nodes.size() && nodes[k - 1] < t; ++k) {
        const double tk = std::min(nodes[k], t);
        const double ck = cert.c.at(tk);
        const double cur = power_over_factorial(ct - ck, i) * spec.perturb.gamma(tk);
        integral += 0.5 * (tk - nodes[k - 1]) * (prev + cur);
        prev = cur;
    }
    return cert.Phi * (cert.r0 * power_over_factorial(ct, i) + integral);
}

std::pair<double, double> fubini_identity_check(const ProblemSpec& spec, double Phi,
                                                std::size_t i, double t, const TimeGrid& quad) {
    if (i < 1) throw Error("fubini_identity_check requires i >= 1");
    auto gamma = [&](double s) { return spec.perturb.gamma(s); };
    auto k_mod = [&](double s) { return spec.perturb.lip_k(s); };
    ScalarGrid c = cumulative_integral(k_mod, quad);
    for (double& v : c.v) v *= Phi;

    const auto& nodes = quad.nodes;
    std::size_t last = 0;  // last node index with nodes[last] <= t
    while (last + 1 < nodes.size() && nodes[last + 1] <= t) ++last;

    // inner(s_k) = Int_{t0}^{s_k} ([c(s_k)-c(tau)]^{i-1}/(i-1)!) gamma(tau) dtau
    std::vector<double> inner(last + 1, 0.0);
    for (std::size_t k = 1; k <= last; ++k) {
        double acc = 0.0;
        double prev = power_over_factorial(c.v[k] - c.v[0], i - 1) * gamma(nodes[0]);
        for (std::size_t j = 1; j <= k; ++j) {
            const double cur = power_over_factorial(c.v[k] - c.v[j], i - 1) * gamma(nodes[j]);
            acc += 0.5 * (nodes[j] - nodes[j - 1]) * (prev + cur);
            prev = cur;
        }
        inner[k] = acc;
    }

    double lhs = 0.0;
    {
        double prev = Phi * k_mod(nodes[0]) * inner[0];
        for (std::size_t k = 1; k <= last; ++k) {
            const double cur = Phi * k_mod(nodes[k]) * inner[k];
            lhs += 0.5 * (nodes[k] - nodes[k - 1]) * (prev + cur);
            prev = cur;
        }
    }

    const double ct = c.at(t);
    double rhs = 0.0;
    {
        double prev = power_over_factorial(ct - c.v[0], i) * gamma(nodes[0]);
        for (std::size_t k = 1; k <= last; ++k) {
            const double cur = power_over_factorial(ct - c.v[k], i) * gamma(nodes[k]);
            rhs += 0.5 * (nodes[k] - nodes[k - 1]) * (prev + cur);
            prev = cur;
        }
    }
    return {lhs, rhs};
}

}  // namespace sweep
