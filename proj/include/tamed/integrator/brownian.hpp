#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tamed/core/problem.hpp"

namespace tamed {

// Number of steps of the uniform 1/n grid covering [0, T]: ceil(nT), with
// n T within 1e-9 (relative) of an integer treated as that integer.
std::size_t grid_steps(int n, double horizon);

// t_k = min(k/n, T).
double grid_time(int n, std::size_t k, double horizon);

// t_{k+1} - t_k: 1/n except for a clipped final step.
double grid_step_length(int n, std::size_t k, double horizon);

//---------------------------------------------------------------------------//
/*!
 * d1-dimensional Wiener increments of one path at the finest resolution.
 *
 * Fine interval j is [t_j, t_{j+1}] with t_j = min(j / n_ref, T); its
 * increment is sqrt(t_{j+1} - t_j) times standard normals drawn from the
 * path stream (master_seed, path_id). Coarser increments are obtained by
 * summing the contained fine increments left to right, so every resolution
 * dividing n_ref sees the same Brownian path.
 */
class BrownianTree
{
  public:
    BrownianTree(std::uint64_t master_seed, std::uint64_t path_id,
                 int finest_resolution, double horizon,
                 std::size_t dim_noise = 1);

    // Writes the fine increments of a path (fine_steps x d1, row-major)
    // without constructing a tree.
    static void fill_fine(std::uint64_t stream_key, int finest_resolution,
                          double horizon, std::size_t dim_noise,
                          std::span<double> out);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t path_id() const noexcept { return path_id_; }
    std::uint64_t stream_key() const noexcept { return stream_key_; }
    int finest_resolution() const noexcept { return finest_; }
    double horizon() const noexcept { return horizon_; }
    std::size_t dim_noise() const noexcept { return dim_noise_; }
    std::size_t fine_steps() const noexcept { return fine_steps_; }

    std::span<const double> fine_increments() const noexcept
    {
        return fine_;
    }

    // Increments over the n-grid (grid_steps(n, T) x d1, row-major).
    // Throws std::invalid_argument unless n divides the finest resolution.
    std::vector<double> coarse_increments(int n) const;

    // W(T) - W(0).
    Vector terminal_value() const;

  private:
    std::uint64_t master_seed_;
    std::uint64_t path_id_;
    std::uint64_t stream_key_;
    int finest_;
    double horizon_;
    std::size_t dim_noise_;
    std::size_t fine_steps_;
    std::vector<double> fine_;
};

} // namespace tamed
