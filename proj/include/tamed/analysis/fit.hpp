#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tamed {

// Least-squares fit of log(error) = intercept - order * log(n).
struct OrderFit
{
    double order = 0.0; // positive means decay
    double intercept = 0.0;
    double order_se = 0.0;
    double residual = 0.0; // root of the residual sum of squares
    std::size_t points_used = 0;
    std::vector<std::string> warnings;
};

// Points with non-positive or non-finite error are dropped with a warning;
// fewer than three remaining points throws FitError.
OrderFit fit_order(const std::vector<std::pair<double, double>>& table);

} // namespace tamed
