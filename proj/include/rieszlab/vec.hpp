#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>

namespace rieszlab {

/// Maximum supported ambient dimension. Experiments live in R^1..R^3;
/// the headroom covers profile studies with larger exponents.
inline constexpr int kMaxDim = 8;

/// Small dense vector in R^m with inline storage and a runtime dimension.
/// Value semantics throughout; no heap traffic in summation loops.
class Vec {
public:
    Vec() = default;

    explicit Vec(int dim) : dim_(dim) {
        assert(dim >= 0 && dim <= kMaxDim);
        c_.fill(0.0);
    }

    Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
        assert(dim_ <= kMaxDim);
        c_.fill(0.0);
        int i = 0;
        for (double x : xs) c_[static_cast<std::size_t>(i++)] = x;
    }

    static Vec zero(int dim) { return Vec(dim); }

    static Vec from(std::span<const double> xs) {
        Vec v(static_cast<int>(xs.size()));
        for (int i = 0; i < v.dim_; ++i) v.c_[static_cast<std::size_t>(i)] = xs[static_cast<std::size_t>(i)];
        return v;
    }

    int dim() const { return dim_; }

    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    const double* data() const { return c_.data(); }

    Vec operator+(const Vec& o) const {
        Vec r(dim_);
        for (int i = 0; i < dim_; ++i) r[i] = (*this)[i] + o[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r(dim_);
        for (int i = 0; i < dim_; ++i) r[i] = (*this)[i] - o[i];
        return r;
    }
    Vec operator*(double t) const {
        Vec r(dim_);
        for (int i = 0; i < dim_; ++i) r[i] = (*this)[i] * t;
        return r;
    }
    Vec operator-() const { return (*this) * -1.0; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) (*this)[i] += o[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) (*this)[i] -= o[i];
        return *this;
    }
    Vec& operator*=(double t) {
        for (int i = 0; i < dim_; ++i) (*this)[i] *= t;
        return *this;
    }

    double dot(const Vec& o) const {
        double acc = 0.0;
        for (int i = 0; i < dim_; ++i) acc += (*this)[i] * o[i];
        return acc;
    }

    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    double dist2(const Vec& o) const {
        double acc = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const double d = (*this)[i] - o[i];
            acc += d * d;
        }
        return acc;
    }
    double dist(const Vec& o) const { return std::sqrt(dist2(o)); }

    bool all_finite() const {
        for (int i = 0; i < dim_; ++i)
            if (!std::isfinite((*this)[i])) return false;
        return true;
    }

private:
    std::array<double, kMaxDim> c_{};
    int dim_ = 0;
};

inline Vec operator*(double t, const Vec& v) { return v * t; }

/// Squared distance between a query point and a flat atom record,
/// accumulated in ascending component order. Every inclusion test in the
/// library (index path and brute force alike) must route through this so
/// ball queries are bit-for-bit reproducible.
inline double point_dist2(const double* a, const Vec& b, int dim) {
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace rieszlab
