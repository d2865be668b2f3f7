#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tamed/analysis/fit.hpp"
#include "tamed/core/problem.hpp"
#include "tamed/integrator/ensemble.hpp"

namespace tamed {

enum class Statistic
{
    strong,
    uniform,
    one_step,
};

std::string to_string(Statistic s);

enum class TimeEval
{
    terminal,
    grid, // sup over the coarse grid points of the per-time means
};

// One (resolution, norm, statistic) estimate.
struct ErrorEntry
{
    int n = 0;
    double p = 0.0;
    Statistic statistic = Statistic::strong;
    double value = 0.0;   // p-th root of the mean
    double std_err = 0.0; // delta-method through the root
    std::size_t path_count = 0;
    std::size_t diverged_count = 0;
    bool outside_scope = false; // no rate claim covers this p
};

struct ErrorReport
{
    std::vector<ErrorEntry> entries;

    // Order fitted over the entries with this norm and statistic.
    OrderFit fit(double p, Statistic statistic) const;
};

// (mean)^{1/p} with its standard error from that of the mean.
void root_of_mean(double mean, double mean_se, double p, double& value,
                  double& value_se);

/*!
 * (E|X_ref(t) - X_n(t)|^p)^{1/p} per resolution, at T or maximised over
 * grid times. p must be one of the plan's error norms. With a gate
 * verdict, inadmissible p is flagged as outside the rate claim's scope.
 */
std::vector<ErrorEntry> strong_error(const Ensemble& ens, double p,
                                     TimeEval t_eval = TimeEval::terminal,
                                     const std::optional<PValidation>& gate = {});

// Terminal error against the plan's exact solution.
std::vector<ErrorEntry> exact_strong_error(const Ensemble& ens, double p);

// (E max_k |X_ref(t_k) - X_n(t_k)|^q)^{1/q}; flagged unless q < validated p.
std::vector<ErrorEntry>
uniform_error(const Ensemble& ens, double q,
              const std::optional<double>& validated_p = {});

struct MomentRow
{
    int n = 0;
    double sup_moment = 0.0; // max over grid times of E|X_n(t_k)|^p
    double std_err = 0.0;
    double at_time = 0.0;
    std::size_t diverged_count = 0;
};

struct MomentSeries
{
    double p = 0.0;
    std::vector<MomentRow> rows;
    // max <= 2 min + 3 sqrt(se_max^2 + se_min^2) over the resolutions.
    bool bounded = false;
    // Non-decreasing in n with last - first above 3 joint SEs.
    bool monotone_increase = false;
    // Some estimate is infinite or some path diverged.
    bool explosion = false;
    double max_over_min = 0.0;
};

struct MomentReport
{
    std::size_t path_count = 0;
    std::vector<MomentSeries> series;

    const MomentSeries& at(double p) const;
};

// p must be among the ensemble's moment norms.
MomentReport moment_report(const Ensemble& ens, const std::vector<double>& p_list);

// Runs a coupled ensemble of the resolutions (the largest serves as the
// reference) and reports time-sup moments.
MomentReport moment_diagnostic(const SdeProblem& problem,
                               const TamingScheme& scheme,
                               const std::vector<int>& resolutions,
                               const std::vector<double>& p_list,
                               std::size_t path_count, std::uint64_t seed,
                               unsigned threads = 1);

struct OneStepReport
{
    double p = 0.0;
    // statistic one_step; value is max over k of E|X_n(t_k) - X_n(t_{k-1})|^p
    // itself, not its root.
    std::vector<ErrorEntry> rows;
    std::optional<OrderFit> fit; // slope on log-log axes is -fit->order
    std::string fit_failure;

    double slope() const { return fit ? -fit->order : 0.0; }
};

OneStepReport one_step_report(const Ensemble& ens, double p);

OneStepReport one_step_diagnostic(const SdeProblem& problem,
                                  const TamingScheme& scheme,
                                  const std::vector<int>& resolutions, double p,
                                  std::size_t path_count, std::uint64_t seed,
                                  unsigned threads = 1);

// Upper end of the admissible exponent window, 1/2 - (2l+1)/p0.
double as_rate_window(const ConditionCertificate& cert);

struct Quantiles
{
    double q50 = 0.0;
    double q90 = 0.0;
    double q99 = 0.0;
    double max = 0.0;
};

// Linear interpolation between order statistics.
Quantiles quantiles(std::vector<double> values);

struct AsRateReport
{
    double kappa = 0.0;
    std::optional<bool> in_window; // set when a certificate is supplied
    std::vector<int> resolutions;
    // Distribution over paths of n^kappa * sup_k |error|, per resolution.
    std::vector<Quantiles> per_resolution;
    // Per path, max over the resolutions: the zeta proxy.
    std::vector<double> zeta;
    Quantiles zeta_quantiles;

    // max / min over resolutions of the 90th percentile.
    double q90_ratio() const;
};

AsRateReport as_rate_diagnostic(
    const Ensemble& ens, double kappa,
    const std::optional<ConditionCertificate>& cert = {});

} // namespace tamed
