#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace sweep {

/// Dense vector in R^d. The ambient dimension is small (d <= 16), so this
/// is a thin value type over std::vector<double> with the handful of
/// operations the solver needs.
class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t n, double fill = 0.0) : data_(n, fill) {}
    Vec(std::initializer_list<double> init) : data_(init) {}

    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    Vec& operator+=(const Vec& r) {
        assert(size() == r.size());
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += r.data_[i];
        return *this;
    }
    Vec& operator-=(const Vec& r) {
        assert(size() == r.size());
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= r.data_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (double& x : data_) x *= s;
        return *this;
    }

    friend bool operator==(const Vec& a, const Vec& b) { return a.data_ == b.data_; }
    friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }

private:
    std::vector<double> data_;
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator-(Vec a) { return a *= -1.0; }

inline double dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

/// a + s*b without an extra temporary per call site.
inline void axpy(Vec& a, double s, const Vec& b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

inline bool all_finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace sweep
