#include "doctest.h"

#include <cmath>
#include <limits>

#include "tamed/core/conditions.hpp"
#include "tamed/core/errors.hpp"
#include "tamed/models/catalog.hpp"
#include "test_support.hpp"

using namespace tamed;

TEST_CASE("three-half certificate survives random sampling")
{
    const auto spec = three_half_model(2.5, 1.0, 1.0, 1, Vector{1.0});
    const auto samples = SampleSpec::random_cloud(1, 1000, 10.0, 1);
    const auto report = validate_certificate(spec.problem, spec.certificate, samples);
    CHECK(report.no_violation_found());
    CHECK(report.check("coercivity").evaluated == 1000);
    CHECK(report.check("monotonicity").no_violation_found());
    CHECK(report.check("polynomial_lipschitz").no_violation_found());
}

TEST_CASE("zero coefficients satisfy any certificate")
{
    const auto problem = test::zero_problem();
    const ConditionCertificate cert(4.0, 3.0, 0.1, 0.1, 0.0);
    const auto samples = SampleSpec::random_cloud(1, 200, 50.0, 2);
    CHECK(validate_certificate(problem, cert, samples).no_violation_found());
}

TEST_CASE("an overstated p0 is refuted at large |x|")
{
    const auto spec = three_half_model(2.5, 1.0, 1.0, 1, Vector{1.0});
    const ConditionCertificate bad(8.0, 3.5, 5.0, 5.0, 1.0);
    const auto scan = SampleSpec::radial_scan(1, 100.0, 2000);
    const auto report = validate_certificate(spec.problem, bad, scan);
    const auto& coercivity = report.check("coercivity");
    CHECK(coercivity.violations > 0);
    CHECK(coercivity.max_violation > 0.0);

    // For x > 0 the excess 2xb + 7|sigma|^2 - K(1+x^2) reduces to 2x^3 - 5.
    const double onset = std::cbrt(2.5);
    const auto near = validate_certificate(
        spec.problem, bad, SampleSpec::radial_scan(1, onset * 1.01, 400));
    CHECK(near.check("coercivity").violations > 0);
    const auto fine = validate_certificate(
        spec.problem, bad, SampleSpec::radial_scan(1, onset * 0.99, 400));
    CHECK(fine.check("coercivity").no_violation_found());
}

TEST_CASE("enlarging K and L never creates violations")
{
    const auto spec = three_half_model(2.5, 1.0, 1.0, 1, Vector{1.0});
    const auto samples = SampleSpec::random_cloud(1, 500, 10.0, 3);
    for (double scale : {1.0, 2.0, 10.0}) {
        const auto& c = spec.certificate;
        const ConditionCertificate bigger(c.p0(), c.p1(), c.K() * scale,
                                          c.L() * scale, c.l());
        CHECK(validate_certificate(spec.problem, bigger, samples)
                  .no_violation_found());
    }
}

TEST_CASE("ball suprema of the coefficients")
{
    // b = -x^3, sigma = x on [-R, R]: sups R^3 and R.
    const auto problem = test::scalar_problem([](double x) { return -x * x * x; },
                                              [](double x) { return x; }, 1.0);
    auto samples = SampleSpec::radial_scan(1, 4.0, 800);
    samples.ball_radii = {1.0, 2.0};
    const ConditionCertificate cert(4.0, 4.0, 10.0, 10.0, 2.0);
    const auto report = validate_certificate(problem, cert, samples);
    REQUIRE(report.ball_sups.size() == 2);
    CHECK(report.ball_sups[0].radius == 1.0);
    CHECK(report.ball_sups[0].drift_sup == doctest::Approx(1.0));
    CHECK(report.ball_sups[0].diffusion_sup == doctest::Approx(1.0));
    CHECK(report.ball_sups[1].drift_sup == doctest::Approx(8.0));
    CHECK(report.ball_sups[1].diffusion_sup == doctest::Approx(2.0));
}

TEST_CASE("non-finite coefficient values are model errors")
{
    const auto problem = test::scalar_problem(
        [](double x) { return x > 1.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0; },
        [](double) { return 0.0; }, 0.0);
    const ConditionCertificate cert(4.0, 4.0, 1.0, 1.0, 0.0);
    CHECK_THROWS_AS(validate_certificate(problem, cert,
                                         SampleSpec::radial_scan(1, 3.0, 30)),
                    ModelEvaluationError);
}

TEST_CASE("sample specs")
{
    const auto cloud = SampleSpec::random_cloud(2, 50, 3.0, 9);
    CHECK(cloud.points.size() == 50);
    CHECK(cloud.pairs.size() == 50);
    for (const auto& p : cloud.points) {
        REQUIRE(p.size() == 2);
        CHECK(std::fabs(p[0]) <= 3.0);
        CHECK(std::fabs(p[1]) <= 3.0);
    }
    const auto again = SampleSpec::random_cloud(2, 50, 3.0, 9);
    CHECK(again.points == cloud.points);
    const auto scan = SampleSpec::radial_scan(2, 1.0, 10);
    CHECK(scan.points.front()[0] == -1.0);
    CHECK(scan.points.back()[0] == 1.0);
    CHECK(scan.points.front()[1] == 0.0);
}
