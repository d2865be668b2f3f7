#include "tamed/integrator/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tamed/core/norms.hpp"

namespace tamed {

double kappa(int n, double t)
{
    if (n < 1 || !(t >= 0.0)) {
        throw std::invalid_argument("kappa: need n >= 1 and t >= 0");
    }
    const double q = static_cast<double>(n) * t;
    const double r = std::nearbyint(q);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::fabs(q));
    const double k = std::fabs(q - r) <= tol ? r : std::floor(q);
    return k / static_cast<double>(n);
}

void euler_step(const TamedCoefficients& coeffs, double t, double dt,
                std::span<const double> x, std::span<const double> dw,
                std::span<double> out, StepScratch& scratch)
{
    coeffs.evaluate(t, x, scratch.drift, scratch.diffusion);
    const std::size_t d = x.size();
    const std::size_t m = dw.size();
    for (std::size_t i = 0; i < d; ++i) {
        double acc = x[i] + scratch.drift[i] * dt;
        for (std::size_t j = 0; j < m; ++j) {
            acc += scratch.diffusion[i * m + j] * dw[j];
        }
        out[i] = acc;
    }
}

Vector euler_step(const TamedCoefficients& coeffs, double t, double dt,
                  std::span<const double> x, std::span<const double> dw)
{
    StepScratch scratch(coeffs.problem());
    Vector out(x.size());
    euler_step(coeffs, t, dt, x, dw, out, scratch);
    return out;
}

GridPath simulate_path(const SdeProblem& problem, const TamingScheme& scheme,
                       int n, const BrownianTree& tree)
{
    if (tree.dim_noise() != problem.dim_noise()) {
        throw std::invalid_argument("simulate_path: noise dimension mismatch");
    }
    if (tree.horizon() != problem.horizon()) {
        throw std::invalid_argument("simulate_path: horizon mismatch");
    }
    const auto increments = tree.coarse_increments(n);
    const TamedCoefficients coeffs(problem, scheme, n);
    const std::size_t d = problem.dim_state();
    const std::size_t m = problem.dim_noise();
    const double T = problem.horizon();
    const std::size_t steps = grid_steps(n, T);

    GridPath path;
    path.resolution = n;
    path.dim = d;
    path.times.resize(steps + 1);
    path.states.assign((steps + 1) * d,
                       std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k <= steps; ++k) {
        path.times[k] = grid_time(n, k, T);
    }
    problem.initial_value(tree.stream_key(), {path.states.data(), d});

    StepScratch scratch(problem);
    for (std::size_t k = 0; k < steps; ++k) {
        std::span<const double> x{path.states.data() + k * d, d};
        std::span<double> next{path.states.data() + (k + 1) * d, d};
        euler_step(coeffs, path.times[k], grid_step_length(n, k, T), x,
                   {increments.data() + k * m, m}, next, scratch);
        if (!all_finite(next)) {
            path.diverged = true;
            path.diverged_at = k;
            std::fill(next.begin(), next.end(),
                      std::numeric_limits<double>::quiet_NaN());
            break;
        }
    }
    return path;
}

CoupledPaths simulate_coupled(const SdeProblem& problem,
                              const TamingScheme& scheme,
                              const std::vector<int>& resolutions,
                              int reference_resolution,
                              const BrownianTree& tree)
{
    if (tree.finest_resolution() % reference_resolution != 0) {
        throw std::invalid_argument(
            "simulate_coupled: reference resolution must divide the tree");
    }
    for (int n : resolutions) {
        if (n < 1 || reference_resolution % n != 0) {
            throw std::invalid_argument(
                "simulate_coupled: " + std::to_string(n) +
                " does not divide " + std::to_string(reference_resolution));
        }
    }
    CoupledPaths out;
    out.reference = simulate_path(problem, scheme, reference_resolution, tree);
    out.coarse.reserve(resolutions.size());
    for (int n : resolutions) {
        if (n == reference_resolution) {
            out.coarse.push_back(out.reference);
        } else {
            out.coarse.push_back(simulate_path(problem, scheme, n, tree));
        }
    }
    return out;
}

std::size_t shared_reference_index(int n, int reference_resolution,
                                   std::size_t k, double horizon)
{
    const std::size_t steps = grid_steps(n, horizon);
    if (k >= steps) {
        return grid_steps(reference_resolution, horizon);
    }
    return k * static_cast<std::size_t>(reference_resolution / n);
}

} // namespace tamed
