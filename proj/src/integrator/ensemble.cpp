#include "tamed/integrator/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "tamed/core/norms.hpp"
#include "tamed/integrator/brownian.hpp"
#include "tamed/integrator/scheme.hpp"
#include "tamed/taming/taming.hpp"

namespace tamed {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Row k of a path stored either row-major (generic) or as one lane of a
// structure-of-arrays block (batched, dim 1).
struct PathView
{
    const double* base = nullptr;
    std::size_t row_stride = 0;
    std::size_t dim = 0;

    std::span<const double> row(std::size_t k) const
    {
        return {base + k * row_stride, dim};
    }
};

double power_or_inf(double v, double p)
{
    if (!std::isfinite(v)) {
        return inf;
    }
    const double r = pow_exponent(v, p);
    return std::isfinite(r) ? r : inf;
}

double finite_or_inf(double v) { return std::isfinite(v) ? v : inf; }

// Flat offsets of the (resolution, norm, grid index) sums.
struct Layout
{
    explicit Layout(const EnsemblePlan& plan, double horizon)
    {
        std::size_t e = 0, m = 0, s = 0;
        for (int n : plan.resolutions) {
            const std::size_t pts = grid_steps(n, horizon) + 1;
            points.push_back(pts);
            error_offset.push_back(e);
            moment_offset.push_back(m);
            step_offset.push_back(s);
            e += pts * plan.error_norms.size();
            m += pts * plan.moment_norms.size();
            s += pts * plan.one_step_norms.size();
            ref_index.emplace_back();
            for (std::size_t k = 0; k < pts; ++k) {
                ref_index.back().push_back(shared_reference_index(
                    n, plan.reference_resolution, k, horizon));
            }
        }
        error_size = e;
        moment_size = m;
        step_size = s;
    }

    std::vector<std::size_t> points;
    std::vector<std::size_t> error_offset, moment_offset, step_offset;
    std::vector<std::vector<std::size_t>> ref_index;
    std::size_t error_size = 0, moment_size = 0, step_size = 0;
};

struct BlockSums
{
    explicit BlockSums(const Layout& layout)
        : error(2 * layout.error_size, 0.0),
          moment(2 * layout.moment_size, 0.0),
          step(2 * layout.step_size, 0.0)
    {
    }
    std::vector<double> error, moment, step; // interleaved (sum, sum_sq)
    std::size_t paths = 0;
    std::vector<std::size_t> diverged;
};

inline void add_pair(std::vector<double>& v, std::size_t idx, double x)
{
    v[2 * idx] += x;
    v[2 * idx + 1] += x * x;
}

struct Context
{
    const SdeProblem& problem;
    const TamingScheme& scheme;
    const EnsemblePlan& plan;
    const Layout& layout;
    Ensemble& out;
};

// Folds one path's coupled trajectories into the block sums and the
// per-path records.
void accumulate_path(const Context& ctx, std::span<const PathView> coarse,
                     const PathView& ref, std::span<const double> w_terminal,
                     std::size_t path, BlockSums& sums, Vector& exact_buf)
{
    const auto& plan = ctx.plan;
    const auto& layout = ctx.layout;
    const std::size_t M = ctx.out.path_count;
    const std::size_t ref_last = grid_steps(plan.reference_resolution,
                                            ctx.problem.horizon());
    if (!all_finite(ref.row(ref_last))) {
        ctx.out.reference_diverged[path] = 1;
    }
    if (plan.exact_solution) {
        plan.exact_solution(ctx.problem.horizon(), ref.row(0), w_terminal,
                            exact_buf);
    }
    for (std::size_t r = 0; r < coarse.size(); ++r) {
        const PathView& x = coarse[r];
        const std::size_t pts = layout.points[r];
        double sup = 0.0;
        double err = 0.0;
        bool diverged = false;
        for (std::size_t k = 0; k < pts; ++k) {
            const auto xk = x.row(k);
            if (!all_finite(xk)) {
                diverged = true;
            }
            err = finite_or_inf(distance(xk, ref.row(layout.ref_index[r][k])));
            sup = std::max(sup, err);
            for (std::size_t p = 0; p < plan.error_norms.size(); ++p) {
                add_pair(sums.error, layout.error_offset[r] + p * pts + k,
                         power_or_inf(err, plan.error_norms[p]));
            }
            if (!plan.moment_norms.empty()) {
                const double nx = finite_or_inf(euclidean_norm(xk));
                for (std::size_t p = 0; p < plan.moment_norms.size(); ++p) {
                    add_pair(sums.moment, layout.moment_offset[r] + p * pts + k,
                             power_or_inf(nx, plan.moment_norms[p]));
                }
            }
            if (k > 0 && !plan.one_step_norms.empty()) {
                const double dx = finite_or_inf(distance(xk, x.row(k - 1)));
                for (std::size_t p = 0; p < plan.one_step_norms.size(); ++p) {
                    add_pair(sums.step, layout.step_offset[r] + p * pts + k,
                             power_or_inf(dx, plan.one_step_norms[p]));
                }
            }
        }
        const std::size_t at = r * M + path;
        ctx.out.terminal_error[at] = err;
        ctx.out.sup_error[at] = sup;
        ctx.out.diverged[at] = diverged ? 1 : 0;
        if (diverged) {
            ++sums.diverged[r];
        }
        if (plan.exact_solution) {
            ctx.out.exact_terminal_error[at] =
                finite_or_inf(distance(x.row(pts - 1), exact_buf));
        }
    }
    ++sums.paths;
}

void run_generic_block(const Context& ctx, std::size_t first,
                       std::size_t count, BlockSums& sums)
{
    const auto& problem = ctx.problem;
    const auto& plan = ctx.plan;
    const std::size_t d = problem.dim_state();
    std::vector<PathView> views(plan.resolutions.size());
    Vector exact_buf(d);
    for (std::size_t i = first; i < first + count; ++i) {
        const BrownianTree tree(ctx.out.master_seed, i,
                                plan.reference_resolution, problem.horizon(),
                                problem.dim_noise());
        const auto paths =
            simulate_coupled(problem, ctx.scheme, plan.resolutions,
                             plan.reference_resolution, tree);
        for (std::size_t r = 0; r < views.size(); ++r) {
            views[r] = {paths.coarse[r].states.data(), d, d};
        }
        const PathView ref{paths.reference.states.data(), d, d};
        Vector w;
        if (plan.exact_solution) {
            w = tree.terminal_value();
        }
        accumulate_path(ctx, views, ref, w, i, sums, exact_buf);
    }
}

// Scratch for one batched block; reused across blocks by a worker.
struct BatchScratch
{
    std::vector<double> path_fine;
    std::vector<double> fine;     // J x lanes
    std::vector<double> ref;      // (J+1) x lanes
    std::vector<double> coarse_dw;
    std::vector<std::vector<double>> coarse; // per resolution (K+1) x lanes
    std::vector<double> w_terminal;
};

void march(const kernels::KernelTable& kt, const kernels::StepParams& params,
           int n, double horizon, std::size_t lanes, const double* dw,
           double* traj)
{
    const std::size_t steps = grid_steps(n, horizon);
    for (std::size_t k = 0; k < steps; ++k) {
        double* next = traj + (k + 1) * lanes;
        std::copy(traj + k * lanes, traj + (k + 1) * lanes, next);
        kt.step(params, grid_step_length(n, k, horizon), next, dw + k * lanes,
                lanes);
    }
}

void run_batched_block(const Context& ctx, const kernels::KernelTable& kt,
                       std::size_t first, std::size_t lanes, BlockSums& sums,
                       BatchScratch& s)
{
    const auto& problem = ctx.problem;
    const auto& plan = ctx.plan;
    const double T = problem.horizon();
    const int nref = plan.reference_resolution;
    const std::size_t J = grid_steps(nref, T);

    s.path_fine.resize(J);
    s.fine.resize(J * lanes);
    s.ref.resize((J + 1) * lanes);
    for (std::size_t j = 0; j < lanes; ++j) {
        const std::uint64_t key =
            derive_stream_key(ctx.out.master_seed, first + j);
        BrownianTree::fill_fine(key, nref, T, 1, s.path_fine);
        for (std::size_t row = 0; row < J; ++row) {
            s.fine[row * lanes + j] = s.path_fine[row];
        }
        problem.initial_value(key, {s.ref.data() + j, 1});
    }

    auto params_for = [&](int n) {
        const TamedCoefficients tamed(problem, ctx.scheme, n);
        return kernels::StepParams{*problem.kernel(), ctx.scheme.kind,
                                   tamed.scale(), ctx.scheme.l};
    };

    march(kt, params_for(nref), nref, T, lanes, s.fine.data(), s.ref.data());

    s.coarse.resize(plan.resolutions.size());
    for (std::size_t r = 0; r < plan.resolutions.size(); ++r) {
        const int n = plan.resolutions[r];
        const std::size_t K = grid_steps(n, T);
        auto& traj = s.coarse[r];
        traj.resize((K + 1) * lanes);
        if (n == nref) {
            std::copy(s.ref.begin(), s.ref.end(), traj.begin());
            continue;
        }
        s.coarse_dw.resize(K * lanes);
        kt.aggregate(s.fine.data(), J, lanes,
                     static_cast<std::size_t>(nref / n), s.coarse_dw.data());
        std::copy(s.ref.begin(), s.ref.begin() + lanes, traj.begin());
        march(kt, params_for(n), n, T, lanes, s.coarse_dw.data(), traj.data());
    }

    if (plan.exact_solution) {
        s.w_terminal.resize(lanes);
        kt.aggregate(s.fine.data(), J, lanes, J, s.w_terminal.data());
    }

    std::vector<PathView> views(plan.resolutions.size());
    Vector exact_buf(1);
    for (std::size_t j = 0; j < lanes; ++j) {
        for (std::size_t r = 0; r < views.size(); ++r) {
            views[r] = {s.coarse[r].data() + j, lanes, 1};
        }
        const PathView ref{s.ref.data() + j, lanes, 1};
        std::span<const double> w;
        if (plan.exact_solution) {
            w = {s.w_terminal.data() + j, 1};
        }
        accumulate_path(ctx, views, ref, w, first + j, sums, exact_buf);
    }
}

void validate_plan(const SdeProblem& problem, const EnsemblePlan& plan,
                   const EnsembleOptions& options)
{
    if (plan.resolutions.empty()) {
        throw std::invalid_argument("run_ensemble: no resolutions");
    }
    if (plan.reference_resolution < 1) {
        throw std::invalid_argument("run_ensemble: bad reference resolution");
    }
    for (int n : plan.resolutions) {
        if (n < 1 || plan.reference_resolution % n != 0) {
            throw std::invalid_argument(
                "run_ensemble: " + std::to_string(n) + " does not divide " +
                std::to_string(plan.reference_resolution));
        }
    }
    auto positive = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double p) { return p > 0; });
    };
    if (!positive(plan.error_norms) || !positive(plan.moment_norms) ||
        !positive(plan.one_step_norms)) {
        throw std::invalid_argument("run_ensemble: norms must be positive");
    }
    if (options.path_count == 0) {
        throw std::invalid_argument("run_ensemble: path_count must be >= 1");
    }
    if (grid_steps(plan.reference_resolution, problem.horizon()) == 0) {
        throw std::invalid_argument("run_ensemble: empty reference grid");
    }
}

} // namespace

std::size_t Ensemble::diverged_count(std::size_t r) const
{
    return grids.at(r).diverged;
}

std::size_t Ensemble::reference_diverged_count() const
{
    return static_cast<std::size_t>(
        std::count(reference_diverged.begin(), reference_diverged.end(), 1));
}

std::size_t Ensemble::norm_index(const std::vector<double>& norms, double p,
                                 const char* what) const
{
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (norms[i] == p) {
            return i;
        }
    }
    throw std::invalid_argument(std::string("ensemble has no ") + what +
                                " accumulator for p = " + std::to_string(p));
}

std::string to_string(EnsembleRoute route)
{
    switch (route) {
    case EnsembleRoute::automatic:
        return "automatic";
    case EnsembleRoute::generic:
        return "generic";
    case EnsembleRoute::batched:
        return "batched";
    }
    return "unknown";
}

Ensemble run_ensemble(const SdeProblem& problem, const TamingScheme& scheme,
                      const EnsemblePlan& plan, const EnsembleOptions& options)
{
    validate_plan(problem, plan, options);
    scheme.validate();

    const bool has_kernel = problem.kernel().has_value();
    EnsembleRoute route = options.route;
    if (route == EnsembleRoute::automatic) {
        route = has_kernel ? EnsembleRoute::batched : EnsembleRoute::generic;
    }
    if (route == EnsembleRoute::batched && !has_kernel) {
        throw std::invalid_argument(
            "run_ensemble: batched route needs a scalar model kernel");
    }
    const auto& kt = kernels::table(options.simd.value_or(kernels::detect_level()));

    const std::size_t M = options.path_count;
    const std::size_t R = plan.resolutions.size();
    Ensemble out;
    out.plan = plan;
    out.path_count = M;
    out.master_seed = options.master_seed;
    out.route_used = route;
    out.simd_used = route == EnsembleRoute::batched ? kt.level
                                                    : kernels::SimdLevel::scalar;
    out.terminal_error.assign(R * M, 0.0);
    out.sup_error.assign(R * M, 0.0);
    out.diverged.assign(R * M, 0);
    out.reference_diverged.assign(M, 0);
    if (plan.exact_solution) {
        out.exact_terminal_error.assign(R * M, 0.0);
    }

    const Layout layout(plan, problem.horizon());
    out.grids.resize(R);
    for (std::size_t r = 0; r < R; ++r) {
        auto& g = out.grids[r];
        g.resolution = plan.resolutions[r];
        const std::size_t pts = layout.points[r];
        for (std::size_t k = 0; k < pts; ++k) {
            g.times.push_back(grid_time(g.resolution, k, problem.horizon()));
        }
        g.error.assign(plan.error_norms.size(), std::vector<RunningMoments>(pts));
        g.moment.assign(plan.moment_norms.size(),
                        std::vector<RunningMoments>(pts));
        g.one_step.assign(plan.one_step_norms.size(),
                          std::vector<RunningMoments>(pts));
    }

    const Context ctx{problem, scheme, plan, layout, out};

    auto merge = [&](const BlockSums& b) {
        for (std::size_t r = 0; r < R; ++r) {
            auto& g = out.grids[r];
            const std::size_t pts = layout.points[r];
            for (std::size_t p = 0; p < plan.error_norms.size(); ++p) {
                for (std::size_t k = 0; k < pts; ++k) {
                    const std::size_t i = layout.error_offset[r] + p * pts + k;
                    g.error[p][k].add_partial(b.error[2 * i], b.error[2 * i + 1],
                                              b.paths);
                }
            }
            for (std::size_t p = 0; p < plan.moment_norms.size(); ++p) {
                for (std::size_t k = 0; k < pts; ++k) {
                    const std::size_t i = layout.moment_offset[r] + p * pts + k;
                    g.moment[p][k].add_partial(b.moment[2 * i],
                                               b.moment[2 * i + 1], b.paths);
                }
            }
            for (std::size_t p = 0; p < plan.one_step_norms.size(); ++p) {
                for (std::size_t k = 1; k < pts; ++k) {
                    const std::size_t i = layout.step_offset[r] + p * pts + k;
                    g.one_step[p][k].add_partial(b.step[2 * i], b.step[2 * i + 1],
                                                 b.paths);
                }
            }
            g.diverged += b.diverged[r];
        }
    };

    const std::size_t blocks = (M + ensemble_block_size - 1) / ensemble_block_size;
    std::atomic<std::size_t> next_block{0};
    std::mutex merge_mutex;
    std::map<std::size_t, BlockSums> pending;
    std::size_t next_merge = 0;
    std::exception_ptr failure;

    auto worker = [&] {
        BatchScratch scratch;
        try {
            for (;;) {
                const std::size_t b = next_block.fetch_add(1);
                if (b >= blocks) {
                    break;
                }
                const std::size_t first = b * ensemble_block_size;
                const std::size_t count = std::min(ensemble_block_size, M - first);
                BlockSums sums(layout);
                sums.diverged.assign(R, 0);
                if (route == EnsembleRoute::batched) {
                    run_batched_block(ctx, kt, first, count, sums, scratch);
                } else {
                    run_generic_block(ctx, first, count, sums);
                }
                std::lock_guard<std::mutex> lock(merge_mutex);
                pending.emplace(b, std::move(sums));
                for (auto it = pending.find(next_merge); it != pending.end();
                     it = pending.find(next_merge)) {
                    merge(it->second);
                    pending.erase(it);
                    ++next_merge;
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(merge_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next_block.store(blocks);
        }
    };

    unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency()
                                            : options.threads;
    threads = std::max(1u, std::min<unsigned>(threads,
                                              static_cast<unsigned>(blocks)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

} // namespace tamed
