#include "tamed/integrator/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tamed/kernels/kernels.hpp"

namespace tamed {

namespace {

bool lands_on_grid(int n, double horizon)
{
    const double q = static_cast<double>(n) * horizon;
    return std::fabs(q - std::nearbyint(q)) <= 1e-9 * std::max(1.0, q);
}

} // namespace

std::size_t grid_steps(int n, double horizon)
{
    if (n < 1 || !(horizon > 0.0)) {
        throw std::invalid_argument("grid_steps: need n >= 1 and T > 0");
    }
    const double q = static_cast<double>(n) * horizon;
    const double steps = lands_on_grid(n, horizon) ? std::nearbyint(q)
                                                   : std::ceil(q);
    return static_cast<std::size_t>(std::max(1.0, steps));
}

double grid_time(int n, std::size_t k, double horizon)
{
    if (k >= grid_steps(n, horizon)) {
        return horizon;
    }
    return std::min(static_cast<double>(k) / static_cast<double>(n), horizon);
}

double grid_step_length(int n, std::size_t k, double horizon)
{
    const std::size_t steps = grid_steps(n, horizon);
    if (k + 1 == steps && !lands_on_grid(n, horizon)) {
        return grid_time(n, k + 1, horizon) - grid_time(n, k, horizon);
    }
    return 1.0 / static_cast<double>(n);
}

BrownianTree::BrownianTree(std::uint64_t master_seed, std::uint64_t path_id,
                           int finest_resolution, double horizon,
                           std::size_t dim_noise)
    : master_seed_(master_seed),
      path_id_(path_id),
      stream_key_(derive_stream_key(master_seed, path_id)),
      finest_(finest_resolution),
      horizon_(horizon),
      dim_noise_(dim_noise),
      fine_steps_(grid_steps(finest_resolution, horizon))
{
    if (dim_noise_ < 1) {
        throw std::invalid_argument("BrownianTree: dim_noise must be >= 1");
    }
    fine_.resize(fine_steps_ * dim_noise_);
    fill_fine(stream_key_, finest_, horizon_, dim_noise_, fine_);
}

void BrownianTree::fill_fine(std::uint64_t stream_key, int finest_resolution,
                             double horizon, std::size_t dim_noise,
                             std::span<double> out)
{
    const std::size_t steps = grid_steps(finest_resolution, horizon);
    if (out.size() != steps * dim_noise) {
        throw std::invalid_argument("BrownianTree::fill_fine: bad buffer size");
    }
    fill_standard_normals(stream_key, StreamDomain::brownian, out);
    for (std::size_t j = 0; j < steps; ++j) {
        const double scale =
            std::sqrt(grid_step_length(finest_resolution, j, horizon));
        for (std::size_t c = 0; c < dim_noise; ++c) {
            out[j * dim_noise + c] *= scale;
        }
    }
}

std::vector<double> BrownianTree::coarse_increments(int n) const
{
    if (n < 1 || finest_ % n != 0) {
        throw std::invalid_argument("BrownianTree: resolution " +
                                    std::to_string(n) + " does not divide " +
                                    std::to_string(finest_));
    }
    const std::size_t group = static_cast<std::size_t>(finest_ / n);
    const std::size_t steps = grid_steps(n, horizon_);
    if ((fine_steps_ + group - 1) / group != steps) {
        throw std::logic_error("BrownianTree: coarse and fine grids disagree");
    }
    std::vector<double> out(steps * dim_noise_);
    kernels::scalar::aggregate(fine_.data(), fine_steps_, dim_noise_, group,
                               out.data());
    return out;
}

Vector BrownianTree::terminal_value() const
{
    Vector w(dim_noise_, 0.0);
    kernels::scalar::aggregate(fine_.data(), fine_steps_, dim_noise_,
                               fine_steps_, w.data());
    return w;
}

} // namespace tamed
