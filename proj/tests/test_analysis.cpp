#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tamed/analysis/analysis.hpp"
#include "tamed/core/errors.hpp"
#include "tamed/models/catalog.hpp"
#include "test_support.hpp"

using namespace tamed;

namespace {

Ensemble run(const SdeProblem& problem, const TamingScheme& scheme,
             std::vector<int> resolutions, int reference, std::size_t paths,
             std::vector<double> error_norms = {2.0},
             std::vector<double> moment_norms = {2.0},
             std::vector<double> one_step_norms = {2.0},
             ExactSolution exact = {})
{
    EnsemblePlan plan;
    plan.resolutions = std::move(resolutions);
    plan.reference_resolution = reference;
    plan.error_norms = std::move(error_norms);
    plan.moment_norms = std::move(moment_norms);
    plan.one_step_norms = std::move(one_step_norms);
    plan.exact_solution = std::move(exact);
    EnsembleOptions options;
    options.path_count = paths;
    options.master_seed = 77;
    options.threads = 2;
    return run_ensemble(problem, scheme, plan, options);
}

} // namespace

TEST_CASE("fit_order on synthetic power laws")
{
    std::vector<std::pair<double, double>> half, flat, inverse;
    for (int k = 4; k <= 10; ++k) {
        const double n = std::ldexp(1.0, k);
        half.emplace_back(n, 1.0 / std::sqrt(n));
        flat.emplace_back(n, 0.3);
        inverse.emplace_back(n, 3.0 / n + 1e-9 * ((k % 2) ? 1.0 : -1.0));
    }
    const auto a = fit_order(half);
    CHECK(a.order == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a.order_se < 1e-12);
    CHECK(a.points_used == 7);
    CHECK(std::fabs(fit_order(flat).order) < 1e-12);
    CHECK(fit_order(inverse).order == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(fit_order(inverse).intercept == doctest::Approx(std::log(3.0)).epsilon(1e-4));
}

TEST_CASE("fit_order excludes unusable points and refuses degenerate tables")
{
    std::vector<std::pair<double, double>> table{
        {16, 0.25}, {32, 0.0}, {64, 0.125}, {128, INFINITY}, {256, 0.0625}};
    const auto fit = fit_order(table);
    CHECK(fit.points_used == 3);
    CHECK(fit.warnings.size() == 2);
    CHECK(fit.order == doctest::Approx(0.5)); // error halves per factor 4 in n
    CHECK_THROWS_AS(fit_order({{16, 1.0}, {32, 0.5}}), FitError);
    CHECK_THROWS_AS(fit_order({{16, 1.0}, {16, 0.5}, {16, 0.2}}), FitError);
}

TEST_CASE("errors vanish when the coarse grid is the reference")
{
    const auto spec = three_half_model(2.5, 1.0, 1.0, 1, Vector{1.0});
    const auto ens = run(spec.problem, TamingScheme::model2(0.5, 1.0), {32}, 32, 100);
    CHECK(strong_error(ens, 2.0).at(0).value == 0.0);
    CHECK(strong_error(ens, 2.0, TimeEval::grid).at(0).value == 0.0);
    CHECK(uniform_error(ens, 1.5).at(0).value == 0.0);
    const auto as = as_rate_diagnostic(ens, 0.3);
    CHECK(as.zeta_quantiles.max == 0.0);
    CHECK(as.q90_ratio() == 1.0);
}

TEST_CASE("strong error of a noiseless linear model against the Euler recursion")
{
    const double a = -0.8, x0 = 1.5;
    const auto spec = linear_model(a, 0.0, x0);
    const std::vector<int> ns{4, 8, 16, 32};
    const auto ens = run(spec.problem, TamingScheme::identity(), ns, 256, 10, {2.0},
                         {2.0}, {2.0}, spec.exact_solution);
    const auto entries = strong_error(ens, 2.0);
    const auto exact_entries = exact_strong_error(ens, 2.0);
    const double reference = x0 * std::pow(1.0 + a / 256, 256);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double euler = x0 * std::pow(1.0 + a / ns[i], ns[i]);
        CHECK(entries[i].value == doctest::Approx(std::fabs(reference - euler)).epsilon(1e-12));
        CHECK(exact_entries[i].value ==
              doctest::Approx(std::fabs(x0 * std::exp(a) - euler)).epsilon(1e-12));
        CHECK(entries[i].std_err == doctest::Approx(0.0));
    }
}

TEST_CASE("uniform error dominates the terminal error and grows with q")
{
    const auto spec = three_half_model(2.5, 1.0, 1.0, 1, Vector{1.0});
    const auto ens = run(spec.problem, TamingScheme::model2(0.5, 1.0), {8, 16, 32},
                         128, 500);
    const auto s = strong_error(ens, 2.0);
    const auto g = strong_error(ens, 2.0, TimeEval::grid);
    const auto u1 = uniform_error(ens, 1.0);
    const auto u15 = uniform_error(ens, 1.5);
    const auto u2 = uniform_error(ens, 2.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(u2[i].value >= s[i].value);
        CHECK(u2[i].value >= g[i].value);
        CHECK(g[i].value >= s[i].value);
        CHECK(u1[i].value <= u15[i].value);
        CHECK(u15[i].value <= u2[i].value);
    }
    // Flagged outside the rate claims unless q < p.
    CHECK(uniform_error(ens, 1.5, 2.0).at(0).outside_scope == false);
    CHECK(uniform_error(ens, 2.0, 2.0).at(0).outside_scope == true);
    CHECK_THROWS_AS(strong_error(ens, 3.0), std::invalid_argument);
}

TEST_CASE("moments of a constant path")
{
    const auto report = moment_diagnostic(test::zero_problem(-1.5), TamingScheme::model1(0.5),
                                          {4, 8, 16}, {2.0, 3.0}, 20, 5);
    for (double p : {2.0, 3.0}) {
        const auto& series = report.at(p);
        for (const auto& row : series.rows) {
            CHECK(row.sup_moment == doctest::Approx(std::pow(1.5, p)).epsilon(1e-14));
            CHECK(row.diverged_count == 0);
        }
        CHECK(series.bounded);
        CHECK_FALSE(series.monotone_increase);
        CHECK_FALSE(series.explosion);
        CHECK(series.max_over_min == doctest::Approx(1.0));
    }
}

TEST_CASE("classical Euler moments explode on the 3/2 model")
{
    const auto spec = three_half_model(40.0, 1.0, 6.0, 1, Vector{1.0});
    const auto report = moment_diagnostic(spec.problem, TamingScheme::identity(),
                                          {16, 32}, {2.0}, 200, 3);
    CHECK(report.at(2.0).explosion);
    CHECK_FALSE(report.at(2.0).bounded);
}

TEST_CASE("one-step displacement of a unit drift")
{
    const auto drift_one = test::scalar_problem([](double) { return 1.0; },
                                                [](double) { return 0.0; }, 0.0);
    for (double p : {1.0, 2.0, 3.0}) {
        const auto report = one_step_diagnostic(drift_one, TamingScheme::identity(),
                                                {4, 8, 16, 32}, p, 10, 1);
        for (const auto& row : report.rows) {
            CHECK(row.value == doctest::Approx(std::pow(row.n, -p)).epsilon(1e-12));
        }
        REQUIRE(report.fit.has_value());
        CHECK(report.slope() == doctest::Approx(-p).epsilon(1e-9));
    }
    const auto zero = one_step_diagnostic(test::zero_problem(), TamingScheme::model1(0.5),
                                          {4, 8, 16}, 2.0, 10, 1);
    for (const auto& row : zero.rows) {
        CHECK(row.value == 0.0);
    }
    CHECK_FALSE(zero.fit.has_value());
    CHECK_FALSE(zero.fit_failure.empty());
}

TEST_CASE("pathwise statistic")
{
    const auto spec = three_half_model(7.5, 1.0, 1.0, 1, Vector{1.0});
    CHECK(as_rate_window(spec.certificate) == doctest::Approx(0.5 - 3.0 / 16.0));
    CHECK(as_rate_window(three_half_model(2.5, 1.0, 1.0, 1, Vector{1.0}).certificate) ==
          doctest::Approx(0.0));

    const auto ens = run(spec.problem, TamingScheme::model2(0.5, 1.0),
                         {8, 16, 32, 64}, 256, 400);
    const auto plain = as_rate_diagnostic(ens, 0.0, spec.certificate);
    CHECK(plain.in_window == false);
    for (std::size_t r = 0; r < 4; ++r) {
        const auto sups = ens.sup_errors(r);
        CHECK(plain.per_resolution[r].max ==
              *std::max_element(sups.begin(), sups.end()));
        if (r > 0) {
            double now = 0, before = 0;
            for (std::size_t i = 0; i < ens.path_count; ++i) {
                now += sups[i];
                before += ens.sup_errors(r - 1)[i];
            }
            CHECK(now < before);
        }
    }
    const auto weighted = as_rate_diagnostic(ens, 0.3, spec.certificate);
    CHECK(weighted.in_window == true);
    for (std::size_t i = 0; i < ens.path_count; ++i) {
        double zeta = 0.0;
        for (std::size_t r = 0; r < 4; ++r) {
            zeta = std::max(zeta, std::pow(ens.plan.resolutions[r], 0.3) * ens.sup_errors(r)[i]);
        }
        CHECK(weighted.zeta[i] == zeta);
    }
}

TEST_CASE("quantiles interpolate and keep infinities")
{
    const auto q = quantiles({4.0, 1.0, 3.0, 2.0, 5.0});
    CHECK(q.q50 == 3.0);
    CHECK(q.q90 == doctest::Approx(4.6));
    CHECK(q.max == 5.0);
    CHECK(std::isinf(quantiles({1.0, INFINITY}).max));
}

TEST_CASE("root of a mean")
{
    double v = 0, se = 0;
    root_of_mean(4.0, 0.4, 2.0, v, se);
    CHECK(v == 2.0);
    CHECK(se == doctest::Approx(0.1)); // d sqrt(m) = dm / (2 sqrt(m))
    root_of_mean(0.0, 0.0, 2.0, v, se);
    CHECK(v == 0.0);
    root_of_mean(INFINITY, 1.0, 2.0, v, se);
    CHECK(std::isinf(v));
}
