#include "tamed/taming/taming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tamed/core/errors.hpp"
#include "tamed/core/norms.hpp"

namespace tamed {

TamedCoefficients::TamedCoefficients(SdeProblem problem, TamingScheme scheme,
                                     int resolution)
    : problem_(std::move(problem)),
      scheme_(scheme),
      resolution_(resolution),
      scale_(std::pow(static_cast<double>(resolution), -scheme.alpha))
{
    if (resolution_ < 1) {
        throw std::invalid_argument("taming: resolution must be >= 1");
    }
    scheme_.validate();
}

double TamedCoefficients::factor(std::span<const double> x,
                                 std::span<const double> drift,
                                 std::span<const double> diffusion) const
{
    switch (scheme_.kind) {
    case TamingKind::identity:
        return 1.0;
    case TamingKind::model1:
        return 1.0 / (1.0 + scale_ * euclidean_norm(drift) +
                      scale_ * hilbert_schmidt_sq(diffusion));
    case TamingKind::model2:
        return 1.0 /
               (1.0 + scale_ * pow_exponent(euclidean_norm(x), scheme_.l));
    }
    return 1.0;
}

void TamedCoefficients::evaluate(double t, std::span<const double> x,
                                 std::span<double> drift,
                                 std::span<double> diffusion) const
{
    problem_.drift(t, x, drift);
    problem_.diffusion(t, x, diffusion);
    if (scheme_.kind == TamingKind::identity) {
        return;
    }
    const double f = factor(x, drift, diffusion);
    for (double& v : drift) {
        v = f * v;
    }
    for (double& v : diffusion) {
        v = f * v;
    }
}

Vector TamedCoefficients::drift(double t, std::span<const double> x) const
{
    Vector b(problem_.dim_state());
    Vector s(problem_.dim_state() * problem_.dim_noise());
    evaluate(t, x, b, s);
    return b;
}

Vector TamedCoefficients::diffusion(double t, std::span<const double> x) const
{
    Vector b(problem_.dim_state());
    Vector s(problem_.dim_state() * problem_.dim_noise());
    evaluate(t, x, b, s);
    return s;
}

CoefficientEvaluator TamedCoefficients::evaluator() const
{
    CoefficientEvaluator ev;
    ev.dim_state = problem_.dim_state();
    ev.dim_noise = problem_.dim_noise();
    ev.eval = [this](double t, std::span<const double> x, std::span<double> b,
                     std::span<double> s) { evaluate(t, x, b, s); };
    return ev;
}

TamedCoefficients tame(const SdeProblem& problem, const TamingScheme& scheme,
                       int n)
{
    return TamedCoefficients(problem, scheme, n);
}

TamedCoefficients tame_model1(const SdeProblem& problem, int n, double alpha)
{
    return TamedCoefficients(problem, TamingScheme::model1(alpha), n);
}

TamedCoefficients tame_model2(const SdeProblem& problem, int n, double alpha,
                              double l)
{
    return TamedCoefficients(problem, TamingScheme::model2(alpha, l), n);
}

namespace {

void record(InequalityCheck& check, double lhs, double rhs, double t,
            std::span<const double> x)
{
    ++check.evaluated;
    const double excess = lhs - rhs;
    if (excess > violation_slack) {
        ++check.violations;
        if (excess > check.max_violation) {
            check.max_violation = excess;
            check.worst_point = describe_point(t, x);
        }
    }
}

void require_finite(std::span<const double> v, double t,
                    std::span<const double> x)
{
    if (!all_finite(v)) {
        throw ModelEvaluationError("non-finite coefficient value at " +
                                   describe_point(t, x));
    }
}

} // namespace

ConditionReport check_B2(const TamedCoefficients& tamed, double C,
                         const SampleSpec& samples)
{
    if (!(C > 0.0)) {
        throw std::invalid_argument("check_B2: C must be positive");
    }
    const auto& problem = tamed.problem();
    const std::size_t d = problem.dim_state();
    const std::size_t m = d * problem.dim_noise();
    Vector b(d), s(m), bn(d), sn(m);
    const double growth =
        C * std::pow(static_cast<double>(tamed.resolution()),
                     tamed.scheme().alpha);

    InequalityCheck drift;
    drift.name = "B2_drift";
    InequalityCheck diffusion;
    diffusion.name = "B2_diffusion";
    for (double t : samples.times) {
        for (const auto& x : samples.points) {
            problem.drift(t, x, b);
            problem.diffusion(t, x, s);
            tamed.evaluate(t, x, bn, sn);
            require_finite(b, t, x);
            require_finite(s, t, x);
            const double nx = euclidean_norm(x);
            record(drift, euclidean_norm(bn),
                   std::min(growth * (1.0 + nx), euclidean_norm(b)), t, x);
            record(diffusion, hilbert_schmidt_sq(sn),
                   std::min(growth * (1.0 + nx * nx), hilbert_schmidt_sq(s)),
                   t, x);
        }
    }
    ConditionReport report;
    report.checks.push_back(std::move(drift));
    report.checks.push_back(std::move(diffusion));
    return report;
}

ConditionReport check_B3(const TamedCoefficients& tamed,
                         const ConditionCertificate& cert,
                         const SampleSpec& samples)
{
    ConditionReport report;
    report.checks.push_back(check_coercivity(tamed.evaluator(), cert.p0(),
                                             cert.K(), samples, "B3"));
    return report;
}

std::vector<TamingDifferenceRow>
check_B1_rate(const SdeProblem& problem, const TamingScheme& scheme,
              const BallGrid& grid, const std::vector<int>& n_list)
{
    if (!(grid.radius > 0.0)) {
        throw std::invalid_argument("check_B1_rate: radius must be positive");
    }
    if (n_list.empty()) {
        throw std::invalid_argument("check_B1_rate: empty resolution list");
    }
    if (grid.points_per_axis < 2 || grid.time_points < 1) {
        throw std::invalid_argument("check_B1_rate: grid too coarse");
    }
    const std::size_t d = problem.dim_state();
    const std::size_t m = d * problem.dim_noise();
    const double cube = std::pow(static_cast<double>(grid.points_per_axis),
                                 static_cast<double>(d));
    if (cube > 1e7) {
        throw std::invalid_argument("check_B1_rate: grid has too many points");
    }

    std::vector<double> axis(grid.points_per_axis);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        axis[i] = -grid.radius + 2.0 * grid.radius * static_cast<double>(i) /
                                     static_cast<double>(axis.size() - 1);
    }
    std::vector<Vector> points;
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
        Vector x(d);
        for (std::size_t k = 0; k < d; ++k) {
            x[k] = axis[idx[k]];
        }
        if (euclidean_norm(x) <= grid.radius) {
            points.push_back(std::move(x));
        }
        std::size_t k = 0;
        while (k < d && ++idx[k] == axis.size()) {
            idx[k++] = 0;
        }
        if (k == d) {
            break;
        }
    }
    std::vector<double> times(grid.time_points, 0.0);
    for (std::size_t j = 1; j < times.size(); ++j) {
        times[j] = problem.horizon() * static_cast<double>(j) /
                   static_cast<double>(times.size() - 1);
    }

    std::vector<TamingDifferenceRow> rows;
    Vector b(d), s(m), bn(d), sn(m), diff_b(d), diff_s(m);
    for (int n : n_list) {
        const TamedCoefficients tamed(problem, scheme, n);
        TamingDifferenceRow row{.n = n};
        for (double t : times) {
            for (const auto& x : points) {
                problem.drift(t, x, b);
                problem.diffusion(t, x, s);
                tamed.evaluate(t, x, bn, sn);
                for (std::size_t i = 0; i < d; ++i) {
                    diff_b[i] = bn[i] - b[i];
                }
                for (std::size_t i = 0; i < m; ++i) {
                    diff_s[i] = sn[i] - s[i];
                }
                row.drift_sup = std::max(row.drift_sup, euclidean_norm(diff_b));
                row.diffusion_sup = std::max(
                    row.diffusion_sup, std::sqrt(hilbert_schmidt_sq(diff_s)));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace tamed
