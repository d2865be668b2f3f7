#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tamed/core/problem.hpp"

namespace tamed {

// Absolute slack on every sampled inequality (lhs - rhs > slack is a
// violation), absorbing rounding near equality boundaries.
inline constexpr double violation_slack = 1e-9;

//---------------------------------------------------------------------------//
// Finite evaluation set for the sampled condition checkers.
struct SampleSpec
{
    std::vector<double> times{0.0};
    std::vector<Vector> points;
    std::vector<std::pair<Vector, Vector>> pairs;
    // Radii at which the local suprema of |b| and |sigma| are reported.
    std::vector<double> ball_radii;

    // `count` points and `count` pairs uniform in [-half_width, half_width]^d.
    static SampleSpec random_cloud(std::size_t dim, std::size_t count,
                                   double half_width, std::uint64_t seed,
                                   std::vector<double> times = {0.0});

    // x = r e_1 for r on a uniform grid of [-r_max, r_max]; pairs (x, 0) and
    // (x, x/2). Deterministic, suited to locating the onset of a violation.
    static SampleSpec radial_scan(std::size_t dim, double r_max,
                                  std::size_t steps,
                                  std::vector<double> times = {0.0});
};

struct InequalityCheck
{
    std::string name;
    std::size_t evaluated = 0;
    std::size_t violations = 0;
    double max_violation = 0.0; // max(lhs - rhs), 0 when nothing is violated
    std::optional<std::string> worst_point;

    // Sampling can refute an inequality but never establish it.
    bool no_violation_found() const noexcept { return violations == 0; }
};

struct BallSupremum
{
    double radius = 0.0;
    double drift_sup = 0.0;
    double diffusion_sup = 0.0;
};

struct ConditionReport
{
    std::vector<InequalityCheck> checks;
    std::vector<BallSupremum> ball_sups;

    bool no_violation_found() const noexcept;
    const InequalityCheck& check(const std::string& name) const;
    std::string summary() const;
};

// Evaluates a pair of coefficients (b, sigma) at (t, x). Shared by the raw
// problem and by tamed coefficients so every checker runs on either.
struct CoefficientEvaluator
{
    std::size_t dim_state = 1;
    std::size_t dim_noise = 1;
    std::function<void(double t, std::span<const double> x,
                       std::span<double> drift, std::span<double> diffusion)>
        eval;

    static CoefficientEvaluator of(const SdeProblem& problem);
};

// 2 x.b + (p0-1)|sigma|^2 <= K (1 + |x|^2) at every sample point.
InequalityCheck check_coercivity(const CoefficientEvaluator& coeffs, double p0,
                                 double K, const SampleSpec& samples,
                                 std::string name = "coercivity");

// Sampled refutation test of a certificate: coercivity, monotonicity and
// polynomial Lipschitz growth of the drift, plus local suprema per ball.
// Throws ModelEvaluationError if a coefficient is non-finite at a sample.
ConditionReport validate_certificate(const SdeProblem& problem,
                                     const ConditionCertificate& cert,
                                     const SampleSpec& samples);

std::string describe_point(double t, std::span<const double> x);

} // namespace tamed
