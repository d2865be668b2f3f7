#pragma once

#include <cmath>

// Scalar coefficient expressions shared by the catalog closures and the
// reference kernels. Operation order matters: the AVX2 kernels replay it
// lane by lane and are tested for bitwise agreement.
namespace tamed::kernels::math {

inline double three_half_drift(double lambda, double mu, double x)
{
    return (lambda * x) * (mu - std::fabs(x));
}

// |x|^{3/2} as |x| sqrt(|x|).
inline double three_half_power(double r) { return r * std::sqrt(r); }

inline double three_half_diffusion(double xi, double x)
{
    return xi * three_half_power(std::fabs(x));
}

inline double ginzburg_landau_drift(double a, double x)
{
    return a * x - (x * x) * x;
}

inline double linear_coefficient(double a, double x) { return a * x; }

} // namespace tamed::kernels::math
