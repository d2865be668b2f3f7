#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tamed/integrator/brownian.hpp"

using namespace tamed;

TEST_CASE("grid helpers")
{
    CHECK(grid_steps(4, 1.0) == 4);
    CHECK(grid_steps(3, 0.5) == 2);
    CHECK(grid_steps(10, 0.3) == 3);
    CHECK(grid_time(4, 2, 1.0) == 0.5);
    CHECK(grid_time(3, 2, 0.5) == 0.5);
    CHECK(grid_step_length(3, 1, 0.5) == doctest::Approx(0.5 - 1.0 / 3.0));
    CHECK(grid_step_length(4, 0, 1.0) == 0.25);
}

TEST_CASE("coarse increments are left-to-right sums of fine increments")
{
    const BrownianTree tree(7, 11, 64, 1.0, 2);
    REQUIRE(tree.fine_steps() == 64);
    const auto fine = tree.fine_increments();
    for (int n : {1, 2, 4, 8, 16, 32, 64}) {
        const auto coarse = tree.coarse_increments(n);
        const std::size_t group = 64 / n;
        REQUIRE(coarse.size() == std::size_t(n) * 2);
        for (int k = 0; k < n; ++k) {
            for (std::size_t c = 0; c < 2; ++c) {
                double s = 0.0;
                for (std::size_t j = 0; j < group; ++j) {
                    s += fine[(k * group + j) * 2 + c];
                }
                CHECK(coarse[k * 2 + c] == s);
            }
        }
    }
    CHECK_THROWS_AS(tree.coarse_increments(3), std::invalid_argument);
    const auto wt = tree.terminal_value();
    const auto one = tree.coarse_increments(1);
    CHECK(wt[0] == one[0]);
    CHECK(wt[1] == one[1]);
}

TEST_CASE("paths are reproducible and separated")
{
    const BrownianTree a(5, 3, 32, 1.0);
    const BrownianTree b(5, 3, 32, 1.0);
    const BrownianTree c(5, 4, 32, 1.0);
    CHECK(std::vector<double>(a.fine_increments().begin(),
                              a.fine_increments().end()) ==
          std::vector<double>(b.fine_increments().begin(),
                              b.fine_increments().end()));
    CHECK(a.fine_increments()[0] != c.fine_increments()[0]);

    std::vector<double> direct(32);
    BrownianTree::fill_fine(a.stream_key(), 32, 1.0, 1, direct);
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(direct[j] == a.fine_increments()[j]);
    }
}

TEST_CASE("fine increment variance matches the step length")
{
    const int n_ref = 64;
    double s2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t path = 0; path < 2000; ++path) {
        const BrownianTree tree(123, path, n_ref, 1.0);
        for (double v : tree.fine_increments()) {
            s2 += v * v;
            ++count;
        }
    }
    CHECK(s2 / count == doctest::Approx(1.0 / n_ref).epsilon(0.05));
}

TEST_CASE("clipped final interval")
{
    const BrownianTree tree(1, 0, 4, 0.6);
    CHECK(tree.fine_steps() == 3);
    const auto coarse = tree.coarse_increments(2);
    CHECK(coarse.size() == 2);
    const auto fine = tree.fine_increments();
    CHECK(coarse[1] == fine[2]);
}
