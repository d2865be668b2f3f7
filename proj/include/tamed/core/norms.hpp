#pragma once

#include <cmath>
#include <span>

namespace tamed {

// Euclidean norm. The one-dimensional case returns |x| directly so that the
// batched scalar kernels and the generic path agree bit for bit.
inline double euclidean_norm(std::span<const double> x)
{
    if (x.size() == 1) {
        return std::fabs(x[0]);
    }
    double acc = 0.0;
    for (double v : x) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

// Squared Hilbert-Schmidt (Frobenius) norm of a row-major matrix.
inline double hilbert_schmidt_sq(std::span<const double> a)
{
    double acc = 0.0;
    for (double v : a) {
        acc += v * v;
    }
    return acc;
}

inline double dot(std::span<const double> x, std::span<const double> y)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] * y[i];
    }
    return acc;
}

inline double distance(std::span<const double> x, std::span<const double> y)
{
    if (x.size() == 1) {
        return std::fabs(x[0] - y[0]);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

// r^l with exact shortcuts for the integer exponents used by the catalog.
// x^0 is 1 for every x, including x = 0.
inline double pow_exponent(double r, double l)
{
    if (l == 0.0) {
        return 1.0;
    }
    if (l == 1.0) {
        return r;
    }
    if (l == 2.0) {
        return r * r;
    }
    return std::pow(r, l);
}

inline bool all_finite(std::span<const double> x)
{
    for (double v : x) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

} // namespace tamed
