#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "tamed/core/format.hpp"
#include "tamed/core/norms.hpp"
#include "tamed/core/summation.hpp"

using namespace tamed;

TEST_CASE("euclidean and Hilbert-Schmidt norms")
{
    const std::vector<double> x{3.0, 4.0};
    CHECK(euclidean_norm(x) == 5.0);
    const std::vector<double> one{-2.5};
    CHECK(euclidean_norm(one) == 2.5);
    const std::vector<double> m{1.0, 2.0, 3.0, 4.0};
    CHECK(hilbert_schmidt_sq(m) == 30.0);
    CHECK(dot(x, x) == 25.0);
    const std::vector<double> y{0.0, 0.0};
    CHECK(distance(x, y) == 5.0);
    CHECK(distance(std::vector<double>{1.0}, std::vector<double>{-1.0}) == 2.0);
}

TEST_CASE("pow_exponent shortcuts agree with pow")
{
    CHECK(pow_exponent(0.0, 0.0) == 1.0);
    CHECK(pow_exponent(0.0, 1.0) == 0.0);
    CHECK(pow_exponent(3.0, 2.0) == 9.0);
    CHECK(pow_exponent(2.0, 1.5) == doctest::Approx(std::pow(2.0, 1.5)));
    CHECK(pow_exponent(1.7, 1.0) == 1.7);
}

TEST_CASE("all_finite")
{
    CHECK(all_finite(std::vector<double>{1.0, -2.0}));
    CHECK_FALSE(all_finite(
        std::vector<double>{1.0, std::numeric_limits<double>::infinity()}));
    CHECK_FALSE(
        all_finite(std::vector<double>{std::numeric_limits<double>::quiet_NaN()}));
}

TEST_CASE("compensated summation")
{
    // 1 + 1e-16 repeated: the naive sum never leaves 1.
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 10000; ++i) {
        s.add(1e-16);
    }
    CHECK(s.value() == doctest::Approx(1.0 + 1e-12).epsilon(1e-15));

    CompensatedSum inf_sum;
    inf_sum.add(1.0);
    inf_sum.add(std::numeric_limits<double>::infinity());
    inf_sum.add(1.0);
    CHECK(std::isinf(inf_sum.value()));

    RunningMoments m;
    for (double v : {1.0, 2.0, 3.0, 4.0}) {
        m.add(v);
    }
    CHECK(m.mean() == 2.5);
    // sample variance 5/3, se = sqrt(5/3 / 4)
    CHECK(m.standard_error() == doctest::Approx(std::sqrt(5.0 / 12.0)));
    RunningMoments single;
    single.add(1.0);
    CHECK(std::isnan(single.standard_error()));
}

TEST_CASE("shortest round-trip formatting")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}
