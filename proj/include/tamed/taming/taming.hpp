#pragma once

#include <vector>

#include "tamed/core/conditions.hpp"
#include "tamed/core/problem.hpp"

namespace tamed {

//---------------------------------------------------------------------------//
/*!
 * Resolution-n coefficients (b_n, sigma_n) = f_n(t, x) * (b, sigma).
 *
 *   identity: f_n = 1
 *   model1:   f_n = 1 / (1 + n^-alpha |b(t,x)| + n^-alpha |sigma(t,x)|^2)
 *   model2:   f_n = 1 / (1 + n^-alpha |x|^l)
 *
 * The factor lies in (0, 1] and is recomputed on every evaluation. Holds a
 * copy of the source problem, so it can outlive the caller's instance.
 */
class TamedCoefficients
{
  public:
    TamedCoefficients(SdeProblem problem, TamingScheme scheme, int resolution);

    const SdeProblem& problem() const noexcept { return problem_; }
    const TamingScheme& scheme() const noexcept { return scheme_; }
    int resolution() const noexcept { return resolution_; }
    // n^-alpha, the value the batched kernels are handed as well.
    double scale() const noexcept { return scale_; }

    // Taming factor given the raw coefficients at (t, x).
    double factor(std::span<const double> x, std::span<const double> drift,
                  std::span<const double> diffusion) const;

    // Writes b_n(t, x) and sigma_n(t, x).
    void evaluate(double t, std::span<const double> x, std::span<double> drift,
                  std::span<double> diffusion) const;

    Vector drift(double t, std::span<const double> x) const;
    Vector diffusion(double t, std::span<const double> x) const;

    CoefficientEvaluator evaluator() const;

  private:
    SdeProblem problem_;
    TamingScheme scheme_;
    int resolution_;
    double scale_;
};

TamedCoefficients tame(const SdeProblem& problem, const TamingScheme& scheme,
                       int n);
TamedCoefficients tame_model1(const SdeProblem& problem, int n, double alpha);
TamedCoefficients tame_model2(const SdeProblem& problem, int n, double alpha,
                              double l);

// |b_n| <= min(C n^alpha (1 + |x|), |b|) and
// |sigma_n|^2 <= min(C n^alpha (1 + |x|^2), |sigma|^2) at every sample.
ConditionReport check_B2(const TamedCoefficients& tamed, double C,
                         const SampleSpec& samples);

// 2 x.b_n + (p0 - 1)|sigma_n|^2 <= K (1 + |x|^2) at every sample.
ConditionReport check_B3(const TamedCoefficients& tamed,
                         const ConditionCertificate& cert,
                         const SampleSpec& samples);

struct TamingDifferenceRow
{
    int n = 0;
    double drift_sup = 0.0;     // max |b_n - b| over the grid
    double diffusion_sup = 0.0; // max |sigma_n - sigma| over the grid
};

struct BallGrid
{
    double radius = 1.0;
    // Points per axis across [-R, R]; cube points outside the ball are dropped.
    std::size_t points_per_axis = 2001;
    std::size_t time_points = 11;
};

/*!
 * Discrete stand-in for the integral-of-sup convergence of the tamed
 * coefficients: for each n, the maximum over a deterministic grid of the
 * ball |x| <= R and of [0, T] of |b_n - b| and |sigma_n - sigma|.
 */
std::vector<TamingDifferenceRow>
check_B1_rate(const SdeProblem& problem, const TamingScheme& scheme,
              const BallGrid& grid, const std::vector<int>& n_list);

} // namespace tamed
