#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tamed/core/problem.hpp"
#include "tamed/integrator/brownian.hpp"
#include "tamed/taming/taming.hpp"

namespace tamed {

// Left grid point floor(n t)/n. Values of n t within a few ulps of an
// integer k are taken as k, so kappa(n, k/n) == k/n for every integer k.
double kappa(int n, double t);

// Scratch buffers for euler_step, sized for one problem.
struct StepScratch
{
    explicit StepScratch(const SdeProblem& problem)
        : drift(problem.dim_state()),
          diffusion(problem.dim_state() * problem.dim_noise())
    {
    }
    Vector drift;
    Vector diffusion;
};

/*!
 * x_{k+1} = x_k + b_n(t_k, x_k) dt + sigma_n(t_k, x_k) dW.
 *
 * Coefficients are frozen at the left endpoint (state and time). The result
 * may be non-finite; callers flag the path as diverged.
 */
void euler_step(const TamedCoefficients& coeffs, double t, double dt,
                std::span<const double> x, std::span<const double> dw,
                std::span<double> out, StepScratch& scratch);

Vector euler_step(const TamedCoefficients& coeffs, double t, double dt,
                  std::span<const double> x, std::span<const double> dw);

// Grid values X_n(t_k), t_k = min(k/n, T), k = 0..grid_steps(n, T).
struct GridPath
{
    int resolution = 0;
    std::size_t dim = 0;
    std::vector<double> times;
    std::vector<double> states; // (steps + 1) x dim, row-major
    bool diverged = false;
    // First step whose result was non-finite; later states are NaN.
    std::optional<std::size_t> diverged_at;

    std::size_t steps() const noexcept { return times.size() - 1; }
    std::span<const double> state(std::size_t k) const
    {
        return {states.data() + k * dim, dim};
    }
};

// Runs the scheme on the n-grid driven by the tree's aggregated increments.
GridPath simulate_path(const SdeProblem& problem, const TamingScheme& scheme,
                       int n, const BrownianTree& tree);

struct CoupledPaths
{
    std::vector<GridPath> coarse;
    GridPath reference;
};

// All resolutions share one Brownian path; the reference (tamed at its own
// resolution) stands in for the exact solution.
CoupledPaths simulate_coupled(const SdeProblem& problem,
                              const TamingScheme& scheme,
                              const std::vector<int>& resolutions,
                              int reference_resolution,
                              const BrownianTree& tree);

// Index into the reference grid that coincides with coarse grid point k.
std::size_t shared_reference_index(int n, int reference_resolution,
                                   std::size_t k, double horizon);

} // namespace tamed
