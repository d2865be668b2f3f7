#include "tamed/core/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tamed/core/errors.hpp"
#include "tamed/core/norms.hpp"

namespace tamed {

SampleSpec SampleSpec::random_cloud(std::size_t dim, std::size_t count,
                                    double half_width, std::uint64_t seed,
                                    std::vector<double> times)
{
    SampleSpec spec;
    spec.times = std::move(times);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> coord(-half_width, half_width);
    auto draw = [&] {
        Vector x(dim);
        for (double& v : x) {
            v = coord(gen);
        }
        return x;
    };
    spec.points.reserve(count);
    spec.pairs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        spec.points.push_back(draw());
    }
    for (std::size_t i = 0; i < count; ++i) {
        Vector x = draw();
        Vector y = draw();
        spec.pairs.emplace_back(std::move(x), std::move(y));
    }
    spec.ball_radii = {half_width / 4.0, half_width / 2.0, half_width};
    return spec;
}

SampleSpec SampleSpec::radial_scan(std::size_t dim, double r_max,
                                   std::size_t steps, std::vector<double> times)
{
    SampleSpec spec;
    spec.times = std::move(times);
    for (std::size_t i = 0; i <= 2 * steps; ++i) {
        const double r = -r_max + r_max * static_cast<double>(i) /
                                      static_cast<double>(steps);
        Vector x(dim, 0.0);
        x[0] = r;
        Vector half = x;
        half[0] = r / 2.0;
        spec.pairs.emplace_back(x, Vector(dim, 0.0));
        spec.pairs.emplace_back(x, half);
        spec.points.push_back(std::move(x));
    }
    spec.ball_radii = {r_max};
    return spec;
}

bool ConditionReport::no_violation_found() const noexcept
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const InequalityCheck& c) {
                           return c.no_violation_found();
                       });
}

const InequalityCheck& ConditionReport::check(const std::string& name) const
{
    for (const auto& c : checks) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("ConditionReport: no check named " + name);
}

std::string ConditionReport::summary() const
{
    std::ostringstream os;
    for (const auto& c : checks) {
        os << c.name << ": ";
        if (c.no_violation_found()) {
            os << "no violation found";
        } else {
            os << c.violations << " violation(s), max excess "
               << c.max_violation;
            if (c.worst_point) {
                os << " at " << *c.worst_point;
            }
        }
        os << " (" << c.evaluated << " samples)\n";
    }
    for (const auto& b : ball_sups) {
        os << "sup_{|x|<=" << b.radius << "} |b| = " << b.drift_sup
           << ", |sigma| = " << b.diffusion_sup << "\n";
    }
    return os.str();
}

std::string describe_point(double t, std::span<const double> x)
{
    std::ostringstream os;
    os.precision(17);
    os << "(t=" << t << ", x=[";
    for (std::size_t i = 0; i < x.size(); ++i) {
        os << (i ? ", " : "") << x[i];
    }
    os << "])";
    return os.str();
}

CoefficientEvaluator CoefficientEvaluator::of(const SdeProblem& problem)
{
    CoefficientEvaluator ev;
    ev.dim_state = problem.dim_state();
    ev.dim_noise = problem.dim_noise();
    ev.eval = [&problem](double t, std::span<const double> x,
                         std::span<double> b, std::span<double> s) {
        problem.drift(t, x, b);
        problem.diffusion(t, x, s);
    };
    return ev;
}

namespace {

struct Workspace
{
    explicit Workspace(const CoefficientEvaluator& c)
        : bx(c.dim_state), by(c.dim_state), sx(c.dim_state * c.dim_noise),
          sy(c.dim_state * c.dim_noise)
    {
    }
    Vector bx, by, sx, sy;
};

void evaluate_checked(const CoefficientEvaluator& c, double t,
                      std::span<const double> x, std::span<double> b,
                      std::span<double> s)
{
    c.eval(t, x, b, s);
    if (!all_finite(b) || !all_finite(s)) {
        throw ModelEvaluationError("non-finite coefficient value at " +
                                   describe_point(t, x));
    }
}

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

} // namespace

InequalityCheck check_coercivity(const CoefficientEvaluator& coeffs, double p0,
                                 double K, const SampleSpec& samples,
                                 std::string name)
{
    InequalityCheck check;
    check.name = std::move(name);
    Workspace ws(coeffs);
    for (double t : samples.times) {
        for (const auto& x : samples.points) {
            evaluate_checked(coeffs, t, x, ws.bx, ws.sx);
            const double nx = euclidean_norm(x);
            const double lhs =
                2.0 * dot(x, ws.bx) + (p0 - 1.0) * hilbert_schmidt_sq(ws.sx);
            record(check, lhs, K * (1.0 + nx * nx), t, x);
        }
    }
    return check;
}

ConditionReport validate_certificate(const SdeProblem& problem,
                                     const ConditionCertificate& cert,
                                     const SampleSpec& samples)
{
    const auto coeffs = CoefficientEvaluator::of(problem);
    ConditionReport report;
    report.checks.push_back(
        check_coercivity(coeffs, cert.p0(), cert.K(), samples));

    InequalityCheck mono;
    mono.name = "monotonicity";
    InequalityCheck growth;
    growth.name = "polynomial_lipschitz";
    Workspace ws(coeffs);
    Vector db(problem.dim_state());
    Vector ds(problem.dim_state() * problem.dim_noise());
    for (double t : samples.times) {
        for (const auto& [x, y] : samples.pairs) {
            evaluate_checked(coeffs, t, x, ws.bx, ws.sx);
            evaluate_checked(coeffs, t, y, ws.by, ws.sy);
            Vector dxy(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                dxy[i] = x[i] - y[i];
                db[i] = ws.bx[i] - ws.by[i];
            }
            for (std::size_t i = 0; i < ds.size(); ++i) {
                ds[i] = ws.sx[i] - ws.sy[i];
            }
            const double dist = euclidean_norm(dxy);
            record(mono,
                   2.0 * dot(dxy, db) +
                       (cert.p1() - 1.0) * hilbert_schmidt_sq(ds),
                   cert.L() * dist * dist, t, x);
            const double weight = 1.0 +
                                  pow_exponent(euclidean_norm(x), cert.l()) +
                                  pow_exponent(euclidean_norm(y), cert.l());
            record(growth, euclidean_norm(db), cert.L() * weight * dist, t, x);
        }
    }
    report.checks.push_back(std::move(mono));
    report.checks.push_back(std::move(growth));

    for (double radius : samples.ball_radii) {
        BallSupremum sup{.radius = radius};
        for (double t : samples.times) {
            for (const auto& x : samples.points) {
                if (euclidean_norm(x) > radius) {
                    continue;
                }
                evaluate_checked(coeffs, t, x, ws.bx, ws.sx);
                sup.drift_sup = std::max(sup.drift_sup, euclidean_norm(ws.bx));
                sup.diffusion_sup = std::max(
                    sup.diffusion_sup, std::sqrt(hilbert_schmidt_sq(ws.sx)));
            }
        }
        report.ball_sups.push_back(sup);
    }
    return report;
}

} // namespace tamed
