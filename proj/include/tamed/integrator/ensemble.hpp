#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tamed/core/problem.hpp"
#include "tamed/core/summation.hpp"
#include "tamed/kernels/kernels.hpp"

namespace tamed {

// Closed-form solution X(t) given X(0) and W(t), when one exists.
using ExactSolution =
    std::function<void(double t, std::span<const double> x0,
                       std::span<const double> w, std::span<double> out)>;

// What a coupled Monte Carlo run should accumulate.
struct EnsemblePlan
{
    std::vector<int> resolutions;
    int reference_resolution = 0;
    // Per grid time: E|X_ref(t_k) - X_n(t_k)|^p, E|X_n(t_k)|^p and
    // E|X_n(t_k) - X_n(t_{k-1})|^p for each listed p.
    std::vector<double> error_norms;
    std::vector<double> moment_norms;
    std::vector<double> one_step_norms;
    // When set, terminal errors against it are recorded as well.
    ExactSolution exact_solution;
};

enum class EnsembleRoute
{
    automatic, // batched kernels when the problem has one, else generic
    generic,   // per-path simulate_coupled through std::function coefficients
    batched,   // scalar model kernels over blocks of paths
};

struct EnsembleOptions
{
    std::size_t path_count = 0;
    std::uint64_t master_seed = 0;
    unsigned threads = 1; // 0: hardware concurrency
    EnsembleRoute route = EnsembleRoute::automatic;
    std::optional<kernels::SimdLevel> simd; // default: detect_level()
};

// Paths are processed in fixed blocks of this size and the per-block sums
// merged in block order, so results do not depend on the thread count.
inline constexpr std::size_t ensemble_block_size = 64;

// Accumulated statistics of one resolution over all paths.
struct GridStatistics
{
    int resolution = 0;
    std::vector<double> times;
    // [norm index][grid index]
    std::vector<std::vector<RunningMoments>> error;
    std::vector<std::vector<RunningMoments>> moment;
    // Grid index k >= 1 refers to the step t_{k-1} -> t_k; entry 0 is unused.
    std::vector<std::vector<RunningMoments>> one_step;
    std::size_t diverged = 0;
};

//---------------------------------------------------------------------------//
/*!
 * Result of a coupled run: per-resolution grid statistics plus per-path
 * terminal and sup-over-grid errors against the reference path.
 *
 * Non-finite states (diverged paths) enter every statistic as +inf.
 */
struct Ensemble
{
    EnsemblePlan plan;
    std::size_t path_count = 0;
    std::uint64_t master_seed = 0;
    EnsembleRoute route_used = EnsembleRoute::generic;
    kernels::SimdLevel simd_used = kernels::SimdLevel::scalar;

    std::vector<GridStatistics> grids; // parallel to plan.resolutions
    // [resolution index * path_count + path]
    std::vector<double> terminal_error;
    std::vector<double> sup_error;
    std::vector<double> exact_terminal_error; // empty without an oracle
    std::vector<std::uint8_t> diverged;
    std::vector<std::uint8_t> reference_diverged; // [path]

    std::size_t resolution_count() const noexcept
    {
        return plan.resolutions.size();
    }
    std::span<const double> terminal_errors(std::size_t r) const
    {
        return {terminal_error.data() + r * path_count, path_count};
    }
    std::span<const double> sup_errors(std::size_t r) const
    {
        return {sup_error.data() + r * path_count, path_count};
    }
    std::span<const double> exact_terminal_errors(std::size_t r) const
    {
        return {exact_terminal_error.data() + r * path_count, path_count};
    }
    std::size_t diverged_count(std::size_t r) const;
    std::size_t reference_diverged_count() const;

    std::size_t norm_index(const std::vector<double>& norms, double p,
                           const char* what) const;
};

Ensemble run_ensemble(const SdeProblem& problem, const TamingScheme& scheme,
                      const EnsemblePlan& plan, const EnsembleOptions& options);

std::string to_string(EnsembleRoute route);

} // namespace tamed
