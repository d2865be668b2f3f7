#include "doctest.h"

#include <cmath>
#include <vector>

#include "tamed/analysis/fit.hpp"
#include "tamed/integrator/scheme.hpp"
#include "tamed/models/catalog.hpp"
#include "test_support.hpp"

using namespace tamed;

TEST_CASE("kappa")
{
    CHECK(kappa(4, 0.6) == 0.5);
    CHECK(kappa(10, 0.37) == 0.3);
    for (int n : {3, 7, 10, 64, 1000}) {
        for (int k = 0; k <= n; ++k) {
            const double t = double(k) / n;
            CHECK(kappa(n, t) == t);
        }
    }
}

TEST_CASE("euler_step examples")
{
    const auto zero = tame(test::zero_problem(), TamingScheme::model1(0.5), 4);
    CHECK(euler_step(zero, 0.0, 0.25, Vector{3.0}, Vector{0.7})[0] == 3.0);

    const auto drift_one = tame(test::scalar_problem([](double) { return 1.0; },
                                                     [](double) { return 0.0; }, 0.0),
                                TamingScheme::identity(), 4);
    CHECK(euler_step(drift_one, 0.0, 0.25, Vector{2.0}, Vector{0.3})[0] == 2.25);

    const auto spec = three_half_model(1.0, 1.0, 1.0, 1, Vector{1.0});
    const auto t = tame_model2(spec.problem, 4, 0.5, 1.0);
    CHECK(euler_step(t, 0.0, 0.25, Vector{1.0}, Vector{0.1})[0] ==
          doctest::Approx(1.0 + 0.1 * 2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("simulate_path")
{
    const BrownianTree tree(31, 2, 64, 1.0);

    const auto constant =
        simulate_path(test::zero_problem(1.5), TamingScheme::model1(0.5), 16, tree);
    REQUIRE(constant.steps() == 16);
    for (std::size_t k = 0; k <= 16; ++k) {
        CHECK(constant.state(k)[0] == 1.5);
    }

    const auto spec = linear_model(0.3, 0.4, 2.0);
    const auto first = simulate_path(spec.problem, TamingScheme::identity(), 32, tree);
    const auto second = simulate_path(spec.problem, TamingScheme::identity(), 32, tree);
    CHECK(first.states == second.states);

    const auto dw = tree.coarse_increments(32);
    double x = 2.0;
    for (std::size_t k = 0; k < 32; ++k) {
        CHECK(first.state(k)[0] == doctest::Approx(x).epsilon(1e-14));
        x = x * (1.0 + 0.3 / 32.0 + 0.4 * dw[k]);
    }
    CHECK(first.state(32)[0] == doctest::Approx(x).epsilon(1e-14));
    CHECK_FALSE(first.diverged);
    CHECK(first.times.back() == 1.0);
}

TEST_CASE("simulate_coupled")
{
    const BrownianTree tree(8, 1, 64, 1.0);
    const auto spec = three_half_model(2.5, 1.0, 1.0, 1, Vector{1.0});
    const auto scheme = TamingScheme::model2(0.5, 1.0);

    const auto same = simulate_coupled(spec.problem, scheme, {64}, 64, tree);
    CHECK(same.coarse.at(0).states == same.reference.states);
    CHECK(same.reference.states == simulate_path(spec.problem, scheme, 64, tree).states);

    const auto coupled = simulate_coupled(spec.problem, scheme, {8, 16}, 64, tree);
    CHECK(coupled.coarse.at(0).states ==
          simulate_path(spec.problem, scheme, 8, tree).states);
    for (std::size_t k = 0; k <= 8; ++k) {
        CHECK(shared_reference_index(8, 64, k, 1.0) == 8 * k);
    }

    // Deterministic ODE x' = -x: error at T of order 1/n.
    const auto ode = test::scalar_problem([](double v) { return -v; },
                                          [](double) { return 0.0; }, 1.0);
    const std::vector<int> ns{8, 16, 32, 64, 128};
    const BrownianTree fine(1, 0, 4096, 1.0);
    const auto paths = simulate_coupled(ode, TamingScheme::identity(), ns, 4096, fine);
    std::vector<std::pair<double, double>> errors;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double coarse = paths.coarse[i].state(ns[i])[0];
        CHECK(coarse == doctest::Approx(std::pow(1.0 - 1.0 / ns[i], ns[i])));
        errors.emplace_back(ns[i], std::fabs(coarse - paths.reference.state(4096)[0]));
    }
    CHECK(fit_order(errors).order == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("classical Euler blows up on a superlinear drift")
{
    const auto blow = test::scalar_problem([](double v) { return -v * v * v; },
                                           [](double) { return 0.0; }, 30.0);
    const BrownianTree tree(1, 0, 8, 1.0);
    const auto path = simulate_path(blow, TamingScheme::identity(), 8, tree);
    CHECK(path.diverged);
    REQUIRE(path.diverged_at.has_value());
    CHECK(std::isnan(path.state(8)[0]));
    const auto tamed_path = simulate_path(blow, TamingScheme::model1(0.5), 8, tree);
    CHECK_FALSE(tamed_path.diverged);
}
