#include "tamed/analysis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tamed/core/errors.hpp"
#include "tamed/core/norms.hpp"
#include "tamed/core/summation.hpp"

namespace tamed {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require_samples(const Ensemble& ens)
{
    if (ens.path_count < 2) {
        throw std::invalid_argument(
            "need at least 2 paths for a standard error");
    }
}

double power_or_inf(double v, double p)
{
    if (!std::isfinite(v)) {
        return inf;
    }
    const double r = pow_exponent(v, p);
    return std::isfinite(r) ? r : inf;
}

RunningMoments moments_of_powers(std::span<const double> values, double p)
{
    RunningMoments m;
    for (double v : values) {
        m.add(power_or_inf(v, p));
    }
    return m;
}

ErrorEntry entry_from_mean(const Ensemble& ens, std::size_t r, double p,
                           Statistic s, const RunningMoments& m)
{
    ErrorEntry e;
    e.n = ens.plan.resolutions[r];
    e.p = p;
    e.statistic = s;
    root_of_mean(m.mean(), m.standard_error(), p, e.value, e.std_err);
    e.path_count = ens.path_count;
    e.diverged_count = ens.diverged_count(r);
    return e;
}

// Index of the grid time with the largest mean, skipping entries before
// `first`.
std::size_t argmax_mean(const std::vector<RunningMoments>& row,
                        std::size_t first)
{
    std::size_t best = first;
    for (std::size_t k = first; k < row.size(); ++k) {
        if (row[k].mean() > row[best].mean()) {
            best = k;
        }
    }
    return best;
}

double joint_se(double a, double b) { return std::sqrt(a * a + b * b); }

std::vector<int> sorted_resolutions(std::vector<int> resolutions)
{
    std::sort(resolutions.begin(), resolutions.end());
    resolutions.erase(std::unique(resolutions.begin(), resolutions.end()),
                      resolutions.end());
    if (resolutions.empty()) {
        throw std::invalid_argument("no resolutions given");
    }
    return resolutions;
}

} // namespace

std::string to_string(Statistic s)
{
    switch (s) {
    case Statistic::strong:
        return "strong";
    case Statistic::uniform:
        return "uniform";
    case Statistic::one_step:
        return "one_step";
    }
    return "unknown";
}

OrderFit ErrorReport::fit(double p, Statistic statistic) const
{
    std::vector<std::pair<double, double>> table;
    for (const auto& e : entries) {
        if (e.p == p && e.statistic == statistic) {
            table.emplace_back(static_cast<double>(e.n), e.value);
        }
    }
    return fit_order(table);
}

void root_of_mean(double mean, double mean_se, double p, double& value,
                  double& value_se)
{
    if (!std::isfinite(mean)) {
        value = inf;
        value_se = inf;
        return;
    }
    if (mean <= 0.0) {
        value = 0.0;
        value_se = 0.0;
        return;
    }
    value = std::pow(mean, 1.0 / p);
    value_se = value / (p * mean) * mean_se;
}

std::vector<ErrorEntry> strong_error(const Ensemble& ens, double p,
                                     TimeEval t_eval,
                                     const std::optional<PValidation>& gate)
{
    require_samples(ens);
    const std::size_t idx = ens.norm_index(ens.plan.error_norms, p, "error");
    std::vector<ErrorEntry> out;
    for (std::size_t r = 0; r < ens.resolution_count(); ++r) {
        const auto& row = ens.grids[r].error[idx];
        const std::size_t k = t_eval == TimeEval::terminal ? row.size() - 1
                                                           : argmax_mean(row, 0);
        auto e = entry_from_mean(ens, r, p, Statistic::strong, row[k]);
        e.outside_scope = gate.has_value() && !gate->admissible;
        out.push_back(e);
    }
    return out;
}

std::vector<ErrorEntry> exact_strong_error(const Ensemble& ens, double p)
{
    require_samples(ens);
    if (ens.exact_terminal_error.empty()) {
        throw std::invalid_argument("ensemble was run without an exact solution");
    }
    std::vector<ErrorEntry> out;
    for (std::size_t r = 0; r < ens.resolution_count(); ++r) {
        out.push_back(entry_from_mean(
            ens, r, p, Statistic::strong,
            moments_of_powers(ens.exact_terminal_errors(r), p)));
    }
    return out;
}

std::vector<ErrorEntry> uniform_error(const Ensemble& ens, double q,
                                      const std::optional<double>& validated_p)
{
    require_samples(ens);
    if (!(q > 0.0)) {
        throw std::invalid_argument("uniform_error: q must be positive");
    }
    std::vector<ErrorEntry> out;
    for (std::size_t r = 0; r < ens.resolution_count(); ++r) {
        auto e = entry_from_mean(ens, r, q, Statistic::uniform,
                                 moments_of_powers(ens.sup_errors(r), q));
        e.outside_scope = !validated_p.has_value() || !(q < *validated_p);
        out.push_back(e);
    }
    return out;
}

const MomentSeries& MomentReport::at(double p) const
{
    for (const auto& s : series) {
        if (s.p == p) {
            return s;
        }
    }
    throw std::invalid_argument("no moment series for p = " + std::to_string(p));
}

MomentReport moment_report(const Ensemble& ens, const std::vector<double>& p_list)
{
    require_samples(ens);
    MomentReport report;
    report.path_count = ens.path_count;
    for (double p : p_list) {
        const std::size_t idx =
            ens.norm_index(ens.plan.moment_norms, p, "moment");
        MomentSeries s;
        s.p = p;
        for (std::size_t r = 0; r < ens.resolution_count(); ++r) {
            const auto& g = ens.grids[r];
            const std::size_t k = argmax_mean(g.moment[idx], 0);
            MomentRow row;
            row.n = g.resolution;
            row.sup_moment = g.moment[idx][k].mean();
            row.std_err = g.moment[idx][k].standard_error();
            row.at_time = g.times[k];
            row.diverged_count = g.diverged;
            s.explosion = s.explosion || !std::isfinite(row.sup_moment) ||
                          row.diverged_count > 0;
            s.rows.push_back(row);
        }
        const auto [lo, hi] = std::minmax_element(
            s.rows.begin(), s.rows.end(), [](const auto& a, const auto& b) {
                return a.sup_moment < b.sup_moment;
            });
        if (s.explosion) {
            s.bounded = false;
            s.max_over_min = inf;
        } else {
            s.bounded = hi->sup_moment <=
                        2.0 * lo->sup_moment +
                            3.0 * joint_se(hi->std_err, lo->std_err);
            s.max_over_min = lo->sup_moment > 0.0
                                 ? hi->sup_moment / lo->sup_moment
                                 : (hi->sup_moment > 0.0 ? inf : 1.0);
        }
        bool nondecreasing = true;
        for (std::size_t r = 1; r < s.rows.size(); ++r) {
            nondecreasing = nondecreasing &&
                            s.rows[r].sup_moment >= s.rows[r - 1].sup_moment;
        }
        const auto& first = s.rows.front();
        const auto& last = s.rows.back();
        s.monotone_increase =
            s.rows.size() > 1 && nondecreasing &&
            last.sup_moment - first.sup_moment >
                3.0 * joint_se(first.std_err, last.std_err);
        report.series.push_back(std::move(s));
    }
    return report;
}

MomentReport moment_diagnostic(const SdeProblem& problem,
                               const TamingScheme& scheme,
                               const std::vector<int>& resolutions,
                               const std::vector<double>& p_list,
                               std::size_t path_count, std::uint64_t seed,
                               unsigned threads)
{
    EnsemblePlan plan;
    plan.resolutions = sorted_resolutions(resolutions);
    plan.reference_resolution = plan.resolutions.back();
    plan.moment_norms = p_list;
    EnsembleOptions options;
    options.path_count = path_count;
    options.master_seed = seed;
    options.threads = threads;
    return moment_report(run_ensemble(problem, scheme, plan, options), p_list);
}

OneStepReport one_step_report(const Ensemble& ens, double p)
{
    require_samples(ens);
    const std::size_t idx =
        ens.norm_index(ens.plan.one_step_norms, p, "one-step");
    OneStepReport report;
    report.p = p;
    std::vector<std::pair<double, double>> table;
    for (std::size_t r = 0; r < ens.resolution_count(); ++r) {
        const auto& row = ens.grids[r].one_step[idx];
        const std::size_t k = argmax_mean(row, 1);
        ErrorEntry e;
        e.n = ens.plan.resolutions[r];
        e.p = p;
        e.statistic = Statistic::one_step;
        e.value = row[k].mean();
        e.std_err = row[k].standard_error();
        e.path_count = ens.path_count;
        e.diverged_count = ens.diverged_count(r);
        report.rows.push_back(e);
        table.emplace_back(static_cast<double>(e.n), e.value);
    }
    try {
        report.fit = fit_order(table);
    } catch (const FitError& err) {
        report.fit_failure = err.what();
    }
    return report;
}

OneStepReport one_step_diagnostic(const SdeProblem& problem,
                                  const TamingScheme& scheme,
                                  const std::vector<int>& resolutions, double p,
                                  std::size_t path_count, std::uint64_t seed,
                                  unsigned threads)
{
    EnsemblePlan plan;
    plan.resolutions = sorted_resolutions(resolutions);
    plan.reference_resolution = plan.resolutions.back();
    plan.one_step_norms = {p};
    EnsembleOptions options;
    options.path_count = path_count;
    options.master_seed = seed;
    options.threads = threads;
    return one_step_report(run_ensemble(problem, scheme, plan, options), p);
}

double as_rate_window(const ConditionCertificate& cert)
{
    return 0.5 - (2.0 * cert.l() + 1.0) / cert.p0();
}

Quantiles quantiles(std::vector<double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("quantiles: empty sample");
    }
    std::sort(values.begin(), values.end());
    auto at = [&](double q) {
        const double h = q * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const double frac = h - static_cast<double>(lo);
        if (frac == 0.0 || lo + 1 >= values.size()) {
            return values[lo];
        }
        if (!std::isfinite(values[lo + 1])) {
            return values[lo + 1];
        }
        return values[lo] + frac * (values[lo + 1] - values[lo]);
    };
    return {at(0.5), at(0.9), at(0.99), values.back()};
}

double AsRateReport::q90_ratio() const
{
    double lo = inf, hi = 0.0;
    for (const auto& q : per_resolution) {
        lo = std::min(lo, q.q90);
        hi = std::max(hi, q.q90);
    }
    if (hi == 0.0) {
        return 1.0;
    }
    return lo > 0.0 ? hi / lo : inf;
}

AsRateReport as_rate_diagnostic(const Ensemble& ens, double kappa,
                                const std::optional<ConditionCertificate>& cert)
{
    AsRateReport report;
    report.kappa = kappa;
    if (cert) {
        report.in_window = kappa > 0.0 && kappa < as_rate_window(*cert);
    }
    report.resolutions = ens.plan.resolutions;
    report.zeta.assign(ens.path_count, 0.0);
    for (std::size_t r = 0; r < ens.resolution_count(); ++r) {
        const double weight =
            std::pow(static_cast<double>(ens.plan.resolutions[r]), kappa);
        const auto sups = ens.sup_errors(r);
        std::vector<double> stat(sups.size());
        for (std::size_t i = 0; i < sups.size(); ++i) {
            stat[i] = std::isfinite(sups[i]) ? weight * sups[i] : inf;
            report.zeta[i] = std::max(report.zeta[i], stat[i]);
        }
        report.per_resolution.push_back(quantiles(std::move(stat)));
    }
    report.zeta_quantiles = quantiles(report.zeta);
    return report;
}

} // namespace tamed
