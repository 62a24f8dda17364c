#pragma once

#include <cstdint>
#include <random>

#include "sweep/vec.hpp"

namespace sweep {

/// Deterministic sampler used by validation and the invariant suites.
/// Uniform doubles are derived from raw engine output so results do not
/// depend on the standard library's distribution implementations.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}

    double unit() {  // in [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * unit(); }

    Vec cube(std::size_t dim, double half_width) {
        Vec v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = uniform(-half_width, half_width);
        return v;
    }

    /// Uniform direction on the unit sphere (Gaussian via Box-Muller).
    Vec direction(std::size_t dim) {
        Vec v(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const double u1 = std::max(unit(), 0x1.0p-60);
            const double u2 = unit();
            v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        }
        const double n = norm(v);
        if (n == 0.0) {
            v[0] = 1.0;
            return v;
        }
        return (1.0 / n) * v;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace sweep
