#include "doctest.h"

#include <stdexcept>

#include "tamed/core/problem.hpp"

using namespace tamed;

namespace {

const ConditionCertificate three_half_cert(6.0, 3.5, 5.0, 5.0, 1.0);

} // namespace

TEST_CASE("p-condition examples")
{
    const auto scheme = TamingScheme::model2(0.5, 1.0);
    const auto ok = validate_p_condition(three_half_cert, scheme, 2.0);
    CHECK(ok.admissible);
    CHECK(ok.growth_bound == 2.0);
    CHECK(ok.max_admissible_p == 2.0);

    const auto bad = validate_p_condition(three_half_cert, scheme, 2.5);
    CHECK_FALSE(bad.admissible);
    REQUIRE_FALSE(bad.reasons.empty());

    // l = 0 reduces the growth constraint to p <= p0.
    const ConditionCertificate flat(8.0, 8.0, 1.0, 1.0, 0.0);
    const auto classical = TamingScheme::model2(0.5, 0.0);
    CHECK(validate_p_condition(flat, classical, 7.9).admissible);
    CHECK_FALSE(validate_p_condition(flat, classical, 8.0).admissible); // p < p1
    const ConditionCertificate wide(8.0, 20.0, 1.0, 1.0, 0.0);
    CHECK(validate_p_condition(wide, classical, 8.0).admissible);
    CHECK_FALSE(validate_p_condition(wide, classical, 8.5).admissible);
}

TEST_CASE("p-condition needs alpha = 1/2 and l <= (p0-2)/4")
{
    CHECK_FALSE(validate_p_condition(three_half_cert,
                                     TamingScheme::model2(0.4, 1.0), 2.0)
                    .admissible);
    const ConditionCertificate steep(4.0, 4.0, 1.0, 1.0, 1.0); // (4-2)/4 < 1
    CHECK_FALSE(validate_p_condition(steep, TamingScheme::model1(0.5), 1.0)
                    .admissible);
}

TEST_CASE("p-condition is monotone in p")
{
    const auto scheme = TamingScheme::model2(0.5, 1.0);
    for (double p = 0.05; p <= 4.0; p += 0.05) {
        if (validate_p_condition(three_half_cert, scheme, p).admissible) {
            for (double q = 0.05; q <= p; q += 0.05) {
                CHECK(validate_p_condition(three_half_cert, scheme, q).admissible);
            }
        }
    }
}

TEST_CASE("scheme and certificate validation")
{
    CHECK_THROWS_AS(TamingScheme::model1(0.0), std::invalid_argument);
    CHECK_THROWS_AS(TamingScheme::model1(0.7), std::invalid_argument);
    CHECK_THROWS_AS(TamingScheme::model2(0.5, -1.0), std::invalid_argument);
    CHECK_NOTHROW(TamingScheme::model1(0.5));
    CHECK(parse_taming_kind("model2") == TamingKind::model2);
    CHECK_THROWS_AS(parse_taming_kind("bogus"), std::invalid_argument);
    CHECK(to_string(TamingKind::identity) == "identity");
    CHECK_THROWS_AS(ConditionCertificate(1.0, 3.0, 1.0, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("problem evaluation and initial values")
{
    const SdeProblem fixed(
        "shift", 1, 1, 1.0,
        [](double, std::span<const double> x, std::span<double> out) {
            out[0] = -x[0];
        },
        [](double, std::span<const double>, std::span<double> out) {
            out[0] = 0.5;
        },
        Vector{2.0});
    CHECK(fixed.has_fixed_initial());
    CHECK(fixed.drift(0.0, Vector{3.0})[0] == -3.0);
    CHECK(fixed.diffusion(0.0, Vector{3.0})[0] == 0.5);
    Vector x0(1);
    fixed.initial_value(17, x0);
    CHECK(x0[0] == 2.0);

    const SdeProblem random(
        "random", 1, 1, 1.0,
        [](double, std::span<const double>, std::span<double> out) { out[0] = 0; },
        [](double, std::span<const double>, std::span<double> out) { out[0] = 0; },
        InitialSampler([](CounterEngine& e, std::span<double> out) {
            out[0] = e.uniform();
        }));
    Vector a(1), b(1), c(1);
    random.initial_value(1, a);
    random.initial_value(1, b);
    random.initial_value(2, c);
    CHECK(a[0] == b[0]);
    CHECK(a[0] != c[0]);

    auto zero = [](double, std::span<const double>, std::span<double>) {};
    CHECK_THROWS_AS(SdeProblem("bad", 0, 1, 1.0, zero, zero, Vector{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SdeProblem("bad", 1, 1, -1.0, zero, zero, Vector{1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(SdeProblem("bad", 1, 1, 1.0, zero, zero, Vector{1.0, 2.0}),
                    std::invalid_argument);
}
