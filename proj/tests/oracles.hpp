#pragma once

// Test-only reference integrators. These provide independent numerical
// oracles for the bound evaluators and stay deliberately separate from the
// library's quadrature path.

#include <cstddef>
#include <utility>

namespace testoracle {

/// RK4 for the memory system rho' = a + b1 rho + b2 m, m' = rho, m(0) = 0.
/// Returns rho(T).
inline double rk4_linear_memory(double rho0, double a, double b1, double b2, double T,
                                std::size_t steps) {
    double rho = rho0, m = 0.0;
    const double h = T / static_cast<double>(steps);
    auto f = [&](double r, double mm) { return std::pair{a + b1 * r + b2 * mm, r}; };
    for (std::size_t k = 0; k < steps; ++k) {
        auto [k1r, k1m] = f(rho, m);
        auto [k2r, k2m] = f(rho + 0.5 * h * k1r, m + 0.5 * h * k1m);
        auto [k3r, k3m] = f(rho + 0.5 * h * k2r, m + 0.5 * h * k2m);
        auto [k4r, k4m] = f(rho + h * k3r, m + h * k3m);
        rho += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
        m += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
    }
    return rho;
}

}  // namespace testoracle
